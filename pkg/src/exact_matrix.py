"""
Exact Matrix module for RANK FLOW.

Dense matrices over a FieldSpec stored as numpy arrays (int64 residues for
GF(p), object arrays of Fractions for Q): ring operations, exact rank by
Gaussian elimination, Horner evaluation of a polynomial at a matrix, 2x2 block
assembly and companion matrices.
"""

import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.error_handler import DegreeTooSmall, DimensionMismatch, DomainMismatch
from src.field_core import FieldScalar, FieldSpec, RawValue
from src.poly_ring import DensePolynomial, require_monic

logger = logging.getLogger(__name__)

# Desk-scale default for the largest matrix order accepted by the harness.
DEFAULT_ORDER_CAP = 64


class DenseMatrix:
    """
    Immutable dense matrix over a FieldSpec.

    The backing array is read-only; every operation returns a new matrix.
    """

    __slots__ = ('domain', '_array')

    def __init__(self, domain: FieldSpec, array: np.ndarray):
        """
        Wrap an array of canonical raw values.

        Args:
            domain: Coefficient field
            array: 2-D array of canonical values (copied)
        """
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise DimensionMismatch(f"Matrix needs a positive 2-D shape, got {array.shape}")
        data = np.array(array, dtype=domain.array_dtype(), copy=True)
        data.flags.writeable = False
        self.domain = domain
        self._array = data

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[Union[int, RawValue, FieldScalar]]],
        spec: FieldSpec
    ) -> 'DenseMatrix':
        """
        Build a matrix from nested rows of ints, Fractions or FieldScalars.

        Raises:
            DimensionMismatch: If rows are empty or ragged
        """
        if not rows or not rows[0]:
            raise DimensionMismatch("Matrix needs at least one row and one column")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatch(f"Row {i} has {len(row)} entries, expected {width}")
        array = np.empty((len(rows), width), dtype=spec.array_dtype())
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                array[i, j] = spec.coerce(entry)
        return cls(spec, array)

    @property
    def array(self) -> np.ndarray:
        """Read-only backing array."""
        return self._array

    @property
    def nrows(self) -> int:
        return self._array.shape[0]

    @property
    def ncols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._array.shape

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return not np.any(self._array != 0)

    def __getitem__(self, index: Tuple[int, int]) -> FieldScalar:
        i, j = index
        return _scalar(self.domain, self._array[i, j])

    def rows(self) -> List[List[FieldScalar]]:
        """Entries as nested lists of FieldScalars."""
        return [[_scalar(self.domain, v) for v in row] for row in self._array]

    @property
    def entries(self) -> Tuple[FieldScalar, ...]:
        """Entries in row-major order."""
        return tuple(_scalar(self.domain, v) for v in self._array.ravel())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return mat_equals(self, other)

    __hash__ = None

    def __add__(self, other: 'DenseMatrix') -> 'DenseMatrix':
        return mat_add(self, other)

    def __sub__(self, other: 'DenseMatrix') -> 'DenseMatrix':
        return mat_sub(self, other)

    def __neg__(self) -> 'DenseMatrix':
        return mat_neg(self)

    def __matmul__(self, other: 'DenseMatrix') -> 'DenseMatrix':
        return mat_mul(self, other)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(s.format_value() for s in row) for row in self.rows())
        return f"DenseMatrix({self.domain}, {self.nrows}x{self.ncols}, [{body}])"


def _scalar(spec: FieldSpec, value) -> FieldScalar:
    if spec.is_prime_field:
        return FieldScalar(spec, int(value))
    return FieldScalar(spec, value)


def _shared_domain(*matrices: DenseMatrix) -> FieldSpec:
    spec = matrices[0].domain
    for m in matrices[1:]:
        if m.domain != spec:
            raise DomainMismatch(f"Cannot combine matrices over {spec} and {m.domain}")
    return spec


def _require_same_shape(P: DenseMatrix, Q: DenseMatrix) -> None:
    if P.shape != Q.shape:
        raise DimensionMismatch(f"Shapes {P.shape} and {Q.shape} differ")


def _require_square(P: DenseMatrix) -> None:
    if not P.is_square():
        raise DimensionMismatch(f"Square matrix required, got {P.nrows}x{P.ncols}")


def mat_zero(r: int, c: int, spec: FieldSpec) -> DenseMatrix:
    """r x c zero matrix."""
    return DenseMatrix(spec, np.full((r, c), spec.coerce(0), dtype=spec.array_dtype()))


def mat_identity(n: int, spec: FieldSpec) -> DenseMatrix:
    """n x n identity."""
    return mat_diagonal([1] * n, spec)


def mat_diagonal(values: Sequence[Union[int, RawValue, FieldScalar]], spec: FieldSpec) -> DenseMatrix:
    """Square diagonal matrix with the given diagonal."""
    n = len(values)
    array = np.full((n, n), spec.coerce(0), dtype=spec.array_dtype())
    for i, v in enumerate(values):
        array[i, i] = spec.coerce(v)
    return DenseMatrix(spec, array)


def mat_add(P: DenseMatrix, Q: DenseMatrix) -> DenseMatrix:
    """Entrywise sum."""
    spec = _shared_domain(P, Q)
    _require_same_shape(P, Q)
    return DenseMatrix(spec, spec.reduce_array(P.array + Q.array))


def mat_neg(P: DenseMatrix) -> DenseMatrix:
    """Additive inverse."""
    return DenseMatrix(P.domain, P.domain.reduce_array(-P.array))


def mat_sub(P: DenseMatrix, Q: DenseMatrix) -> DenseMatrix:
    """P - Q."""
    spec = _shared_domain(P, Q)
    _require_same_shape(P, Q)
    return DenseMatrix(spec, spec.reduce_array(P.array - Q.array))


def mat_scale(P: DenseMatrix, c: Union[int, RawValue, FieldScalar]) -> DenseMatrix:
    """c * P for a scalar c."""
    spec = P.domain
    return DenseMatrix(spec, spec.reduce_array(P.array * spec.coerce(c)))


def mat_mul(P: DenseMatrix, Q: DenseMatrix) -> DenseMatrix:
    """
    Exact matrix product.

    Raises:
        DimensionMismatch: If P.ncols != Q.nrows
        DomainMismatch: If the fields differ
    """
    spec = _shared_domain(P, Q)
    if P.ncols != Q.nrows:
        raise DimensionMismatch(f"Cannot multiply {P.nrows}x{P.ncols} by {Q.nrows}x{Q.ncols}")
    return DenseMatrix(spec, spec.matmul_arrays(P.array, Q.array))


def mat_power(P: DenseMatrix, k: int) -> DenseMatrix:
    """P**k by repeated multiplication (identity for k = 0)."""
    _require_square(P)
    result = mat_identity(P.nrows, P.domain)
    for _ in range(k):
        result = mat_mul(result, P)
    return result


def transpose(P: DenseMatrix) -> DenseMatrix:
    return DenseMatrix(P.domain, P.array.T)


def mat_equals(P: DenseMatrix, Q: DenseMatrix) -> bool:
    """Exact equality (False for different fields or shapes)."""
    if P.domain != Q.domain or P.shape != Q.shape:
        return False
    return bool(np.all(P.array == Q.array))


def mat_rank(P: DenseMatrix) -> int:
    """
    Exact rank by Gaussian elimination.

    Pivot: first nonzero entry of the current column scanning downward. The
    pivot row is normalized and eliminated from the rows below it; the rank is
    the number of pivots found.
    """
    spec = P.domain
    work = np.array(P.array, dtype=spec.array_dtype(), copy=True)
    nrows, ncols = work.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        candidates = np.flatnonzero(work[rank:, c] != 0)
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            work[[rank, pivot], :] = work[[pivot, rank], :]
        pivot_value = work[rank, c]
        if spec.is_prime_field:
            pivot_value = int(pivot_value)
        work[rank, :] = spec.reduce_array(work[rank, :] * spec.inverse_value(pivot_value))
        column = work[rank + 1:, c].copy()
        if np.any(column != 0):
            correction = spec.reduce_array(np.multiply.outer(column, work[rank, :]))
            work[rank + 1:, :] = spec.reduce_array(work[rank + 1:, :] - correction)
        rank += 1
    logger.debug(f"rank of {nrows}x{ncols} matrix over {spec}: {rank}")
    return rank


def horner_eval(p: DensePolynomial, A: DenseMatrix) -> DenseMatrix:
    """
    p(A) by Horner's scheme; the constant term contributes c0 * I.

    Raises:
        DimensionMismatch: If A is not square
        DomainMismatch: If p and A live over different fields
    """
    if p.domain != A.domain:
        raise DomainMismatch(f"Polynomial over {p.domain} evaluated at matrix over {A.domain}")
    _require_square(A)
    spec = A.domain
    n = A.nrows
    if p.is_zero():
        return mat_zero(n, n, spec)

    diagonal = np.arange(n)
    coeffs = p.values()
    result = np.full((n, n), spec.coerce(0), dtype=spec.array_dtype())
    result[diagonal, diagonal] = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        result = spec.matmul_arrays(result, A.array)
        result[diagonal, diagonal] = spec.reduce_array(result[diagonal, diagonal] + c)
    return DenseMatrix(spec, result)


def block2x2(P11: DenseMatrix, P12: DenseMatrix, P21: DenseMatrix, P22: DenseMatrix) -> DenseMatrix:
    """
    Assemble [[P11, P12], [P21, P22]] from four n x n blocks.

    Raises:
        DimensionMismatch: If the blocks are not all n x n for one n
        DomainMismatch: If the blocks live over different fields
    """
    spec = _shared_domain(P11, P12, P21, P22)
    n = P11.nrows
    for block in (P11, P12, P21, P22):
        if block.shape != (n, n):
            raise DimensionMismatch(f"Blocks must all be {n}x{n}, got {block.shape}")
    return DenseMatrix(spec, np.block([[P11.array, P12.array], [P21.array, P22.array]]))


def block_of(P: DenseMatrix, i: int, j: int) -> DenseMatrix:
    """
    Block (i, j), i, j in {0, 1}, of a 2n x 2n matrix.

    Raises:
        DimensionMismatch: If P is not square of even order
    """
    if not P.is_square() or P.nrows % 2:
        raise DimensionMismatch(f"Expected a 2n x 2n matrix, got {P.nrows}x{P.ncols}")
    n = P.nrows // 2
    return DenseMatrix(P.domain, P.array[i * n:(i + 1) * n, j * n:(j + 1) * n])


def companion(p: DensePolynomial) -> DenseMatrix:
    """
    Companion matrix of a monic p of degree d >= 1: ones on the subdiagonal,
    last column the negated low coefficients. Its characteristic and minimal
    polynomials both equal p.

    Raises:
        NotMonic: If p is not monic
        DegreeTooSmall: If deg p < 1
    """
    if p.is_zero() or p.degree < 1:
        raise DegreeTooSmall(f"Companion matrix needs degree >= 1, got {p}")
    require_monic(p)
    spec = p.domain
    d = int(p.degree)
    array = np.full((d, d), spec.coerce(0), dtype=spec.array_dtype())
    for i in range(1, d):
        array[i, i - 1] = spec.coerce(1)
    for i in range(d):
        array[i, d - 1] = spec.coerce((-p.coefficient(i)).value)
    return DenseMatrix(spec, array)


def matrices_commute(P: DenseMatrix, Q: DenseMatrix) -> bool:
    """True iff P*Q == Q*P."""
    return mat_equals(mat_mul(P, Q), mat_mul(Q, P))

