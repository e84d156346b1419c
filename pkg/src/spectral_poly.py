"""
Spectral Polynomial module for RANK FLOW.

Characteristic polynomial by the division-free Berkowitz algorithm and minimal
polynomial by a Krylov dependency search on the vectorized powers I, A, A^2, ...
Both are exact over Q and every supported GF(p), GF(2) included.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from src.error_handler import DimensionMismatch, DivisionByZero
from src.exact_matrix import DenseMatrix, _scalar, mat_identity, mat_mul
from src.field_core import FieldScalar, inv
from src.poly_ring import DensePolynomial, poly_divmod

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralData:
    """Characteristic and minimal polynomial of a square matrix."""
    matrix_order: int
    char_poly: DensePolynomial
    min_poly: DensePolynomial


def _require_square(A: DenseMatrix) -> None:
    if not A.is_square():
        raise DimensionMismatch(f"Square matrix required, got {A.nrows}x{A.ncols}")


def char_poly(A: DenseMatrix) -> DensePolynomial:
    """
    Monic det(X*I - A) by Berkowitz.

    Works bottom-up over the trailing principal submatrices: each step
    multiplies the previous coefficient vector by a lower-triangular Toeplitz
    matrix built from a, R*C, R*S*C, R*S^2*C, ... where [[a, R], [C, S]] is the
    partition of the current submatrix. Only ring operations are used.
    """
    _require_square(A)
    spec = A.domain
    n = A.nrows
    a = A.array
    one = spec.one()

    # descending coefficients of the trailing 1x1 block
    vector: List[FieldScalar] = [one, -_scalar(spec, a[n - 1, n - 1])]
    for k in range(n - 2, -1, -1):
        m = n - k
        R = a[k:k + 1, k + 1:]
        S = a[k + 1:, k + 1:]
        column = a[k + 1:, k:k + 1]

        toeplitz = [one, -_scalar(spec, a[k, k])]
        for _ in range(m - 1):
            toeplitz.append(-_scalar(spec, spec.matmul_arrays(R, column)[0, 0]))
            column = spec.matmul_arrays(S, column)

        next_vector = []
        for i in range(m + 1):
            total = spec.zero()
            for j in range(min(i, m - 1) + 1):
                total = total + toeplitz[i - j] * vector[j]
            next_vector.append(total)
        vector = next_vector

    return DensePolynomial.from_values(reversed(vector), spec)


def min_poly(A: DenseMatrix) -> DensePolynomial:
    """
    Monic minimal polynomial.

    Vectorizes I, A, A^2, ... and stops at the first power that is a linear
    combination of the lower ones; that dependency, normalized so the top
    power has coefficient 1, is m_A. Cayley-Hamilton bounds the search by n.
    """
    _require_square(A)
    spec = A.domain
    n = A.nrows
    zero = spec.zero()

    # (pivot, normalized row, combination of powers producing that row)
    basis: List[Tuple[int, List[FieldScalar], List[FieldScalar]]] = []
    power = mat_identity(n, spec)
    for k in range(n + 1):
        row = list(power.entries)
        combo = [zero] * k + [spec.one()]
        for pivot, basis_row, basis_combo in basis:
            c = row[pivot]
            if c.is_zero():
                continue
            row = [x - c * y for x, y in zip(row, basis_row)]
            combo = [x - c * (basis_combo[i] if i < len(basis_combo) else zero)
                     for i, x in enumerate(combo)]
        pivot = next((i for i, x in enumerate(row) if not x.is_zero()), None)
        if pivot is None:
            result = DensePolynomial.from_values(combo, spec)
            logger.debug(f"minimal polynomial of {n}x{n} matrix has degree {result.degree}")
            return result
        scale = inv(row[pivot])
        basis.append((pivot, [x * scale for x in row], [x * scale for x in combo]))
        power = mat_mul(power, A)

    raise ArithmeticError("Krylov search exceeded the matrix order")


def poly_divides(p: DensePolynomial, q: DensePolynomial) -> bool:
    """
    True iff p divides q.

    Raises:
        DivisionByZero: If p is the zero polynomial
    """
    if p.is_zero():
        raise DivisionByZero("Divisibility by the zero polynomial")
    _, remainder = poly_divmod(q, p)
    return remainder.is_zero()


def spectral_data(A: DenseMatrix) -> SpectralData:
    """Characteristic and minimal polynomial of A together."""
    return SpectralData(matrix_order=A.nrows, char_poly=char_poly(A), min_poly=min_poly(A))
