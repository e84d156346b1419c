"""
Classifiers module for RANK FLOW.

Decides matrix properties (idempotent, involutive, tripotent, A^3 = A^5) by
rank equations and checks the rank identities for coprime factorizations of
the characteristic polynomial and for f = x + x^2, g = x - x^2. Every
statement is evaluated from scratch with its own Horner evaluations and
eliminations; the report then compares the statements with the defining
matrix equation.
"""

import logging
from typing import Dict, List, Optional, Sequence, Union

from src.error_handler import (
    CharacteristicTwo, DimensionMismatch, DomainMismatch, NotCharPolyFactorization,
    NotPairwiseCoprime
)
from src.exact_matrix import DenseMatrix, horner_eval, mat_identity, mat_mul, mat_power, mat_rank
from src.models import ClassificationReport, PropertyKind, Statement
from src.poly_ring import DensePolynomial, pairwise_coprime, poly_monic, poly_product
from src.rank_theorem import build_certificate, verify_certificate
from src.spectral_poly import char_poly

logger = logging.getLogger(__name__)

PROPERTY_NAMES = tuple(kind.value for kind in PropertyKind)


class _RankTable:
    """Ranks of polynomial expressions in A, recorded under their labels."""

    def __init__(self, A: DenseMatrix):
        self.A = A
        self.used: Dict[str, int] = {}

    def rank(self, label: str, coeffs: Sequence[int]) -> int:
        """Rank of p(A) for ascending integer coefficients, evaluated afresh."""
        p = DensePolynomial.from_values(coeffs, self.A.domain)
        value = mat_rank(horner_eval(p, self.A))
        self.used[label] = value
        return value


def _require_square(A: DenseMatrix) -> None:
    if not A.is_square():
        raise DimensionMismatch(f"Square matrix required, got {A.nrows}x{A.ncols}")


def _require_odd_characteristic(A: DenseMatrix, kind: PropertyKind) -> None:
    if A.domain.characteristic == 2:
        raise CharacteristicTwo(f"{kind.value} classification needs a field of characteristic other than 2")


def classify_idempotent(A: DenseMatrix) -> ClassificationReport:
    """A^2 = A  <=>  rank A + rank(I - A) = n."""
    _require_square(A)
    n = A.nrows
    t = _RankTable(A)
    statements = [
        Statement("rank A + rank(I - A) = n", t.rank("A", [0, 1]) + t.rank("I - A", [1, -1]) == n),
    ]
    direct = mat_mul(A, A) == A
    return ClassificationReport(PropertyKind.IDEMPOTENT, A.domain, n, statements, direct, t.used)


def classify_involutive(A: DenseMatrix) -> ClassificationReport:
    """
    A^2 = I  <=>  rank(I - A) + rank(I + A) = n.

    Raises:
        CharacteristicTwo: Over GF(2)
    """
    _require_square(A)
    _require_odd_characteristic(A, PropertyKind.INVOLUTIVE)
    n = A.nrows
    t = _RankTable(A)
    statements = [
        Statement("rank(I - A) + rank(I + A) = n", t.rank("I - A", [1, -1]) + t.rank("I + A", [1, 1]) == n),
    ]
    direct = mat_mul(A, A) == mat_identity(n, A.domain)
    return ClassificationReport(PropertyKind.INVOLUTIVE, A.domain, n, statements, direct, t.used)


def classify_tripotent(A: DenseMatrix) -> ClassificationReport:
    """
    A^3 = A and three equivalent rank statements.

    The ranks map also records n + rank(I - A^2) and rank(I - A) + rank(I + A),
    which agree for every A away from characteristic 2.

    Raises:
        CharacteristicTwo: Over GF(2)
    """
    _require_square(A)
    _require_odd_characteristic(A, PropertyKind.TRIPOTENT)
    n = A.nrows
    t = _RankTable(A)
    statements = [
        Statement("rank A + rank(I - A^2) = n",
                  t.rank("A", [0, 1]) + t.rank("I - A^2", [1, 0, -1]) == n),
        Statement("rank(I - A) + rank(A + A^2) = n",
                  t.rank("I - A", [1, -1]) + t.rank("A + A^2", [0, 1, 1]) == n),
        Statement("rank A + rank(I - A) + rank(I + A) = 2n",
                  t.rank("A", [0, 1]) + t.rank("I - A", [1, -1]) + t.rank("I + A", [1, 1]) == 2 * n),
    ]
    ranks = dict(t.used)
    ranks["n + rank(I - A^2)"] = n + ranks["I - A^2"]
    ranks["rank(I - A) + rank(I + A)"] = ranks["I - A"] + ranks["I + A"]
    direct = mat_power(A, 3) == A
    return ClassificationReport(PropertyKind.TRIPOTENT, A.domain, n, statements, direct, ranks)


def classify_a3a5(A: DenseMatrix) -> ClassificationReport:
    """
    A^3 = A^5 and seven equivalent rank statements.

    Raises:
        CharacteristicTwo: Over GF(2)
    """
    _require_square(A)
    _require_odd_characteristic(A, PropertyKind.A3_EQUALS_A5)
    n = A.nrows
    t = _RankTable(A)
    x3 = [0, 0, 0, 1]
    x3_plus_x4 = [0, 0, 0, 1, 1]
    x3_minus_x4 = [0, 0, 0, 1, -1]
    statements = [
        Statement("rank A^3 + rank(I - A^2) = n",
                  t.rank("A^3", x3) + t.rank("I - A^2", [1, 0, -1]) == n),
        Statement("rank(I - A) + rank(A^3 + A^4) = n",
                  t.rank("I - A", [1, -1]) + t.rank("A^3 + A^4", x3_plus_x4) == n),
        Statement("rank(I + A) + rank(A^3 - A^4) = n",
                  t.rank("I + A", [1, 1]) + t.rank("A^3 - A^4", x3_minus_x4) == n),
        Statement("rank A^3 + rank(I - A) + rank(I + A) = 2n",
                  t.rank("A^3", x3) + t.rank("I - A", [1, -1]) + t.rank("I + A", [1, 1]) == 2 * n),
        Statement("rank(A - A^2) + rank(A^3 + A^4) = rank A",
                  t.rank("A - A^2", [0, 1, -1]) + t.rank("A^3 + A^4", x3_plus_x4) == t.rank("A", [0, 1])),
        Statement("rank(A + A^2) + rank(A^3 - A^4) = rank A",
                  t.rank("A + A^2", [0, 1, 1]) + t.rank("A^3 - A^4", x3_minus_x4) == t.rank("A", [0, 1])),
        Statement("rank(A^3 + A^4) + rank(A^3 - A^4) = rank A^3",
                  t.rank("A^3 + A^4", x3_plus_x4) + t.rank("A^3 - A^4", x3_minus_x4) == t.rank("A^3", x3)),
    ]
    direct = mat_power(A, 3) == mat_power(A, 5)
    return ClassificationReport(PropertyKind.A3_EQUALS_A5, A.domain, n, statements, direct, t.used)


def charfactor_rank_sum(A: DenseMatrix, factors: Sequence[DensePolynomial]) -> ClassificationReport:
    """
    Rank sum over a pairwise coprime factorization f_1 ... f_k of char_poly(A):
    sum rank f_i(A) = (k - 1) n.

    Also reports the partial products: for j = 2..k,
    rank (f_1...f_j)(A) + sum_{i > j} rank f_i(A) = (k - j) n.
    direct_check is (f_1...f_k)(A) = 0.

    Raises:
        NotPairwiseCoprime: If two factors share a common divisor
        NotCharPolyFactorization: If the product is not char_poly(A) up to a scalar
    """
    _require_square(A)
    if not factors:
        raise NotCharPolyFactorization("At least one factor is required")
    for p in factors:
        if p.domain != A.domain:
            raise DomainMismatch(f"Factor over {p.domain} used with matrix over {A.domain}")
    if not pairwise_coprime(factors):
        raise NotPairwiseCoprime("Factors are not pairwise coprime")
    product = poly_product(factors, A.domain)
    if product.is_zero() or poly_monic(product) != char_poly(A):
        raise NotCharPolyFactorization(f"Product {product} is not the characteristic polynomial up to a scalar")

    n = A.nrows
    k = len(factors)
    ranks: Dict[str, int] = {}

    def factor_rank(i: int) -> int:
        value = mat_rank(horner_eval(factors[i], A))
        ranks[f"f{i + 1}(A)"] = value
        return value

    statements = [
        Statement(f"sum of rank f_i(A) = {k - 1}n", sum(factor_rank(i) for i in range(k)) == (k - 1) * n),
    ]
    for j in range(2, k + 1):
        head = poly_product(factors[:j], A.domain)
        head_rank = mat_rank(horner_eval(head, A))
        ranks[f"(f1...f{j})(A)"] = head_rank
        tail = sum(factor_rank(i) for i in range(j, k))
        statements.append(Statement(
            f"rank (f1...f{j})(A) + sum_{{i>{j}}} rank f_i(A) = {k - j}n",
            head_rank + tail == (k - j) * n
        ))

    direct = horner_eval(product, A).is_zero()
    return ClassificationReport(PropertyKind.CHAR_FACTOR_RANK_SUM, A.domain, n, statements, direct, ranks)


def rank_identity_app5(A: DenseMatrix) -> ClassificationReport:
    """
    rank(A + A^2) + rank(A - A^2) = rank D(A) + rank M(A) for
    f = x + x^2, g = x - x^2, checked through the full certificate.

    Away from characteristic 2, D = x and M ~ x - x^3, and the literal identity
    rank(A + A^2) + rank(A - A^2) = rank A + rank(A - A^3) is evaluated as a
    second, independent statement. direct_check is the certificate verification.
    """
    _require_square(A)
    spec = A.domain
    n = A.nrows
    f = DensePolynomial.from_values([0, 1, 1], spec)
    g = DensePolynomial.from_values([0, 1, -1], spec)
    cert = build_certificate(A, f, g)
    ranks = {"A + A^2": cert.rank_f, "A - A^2": cert.rank_g, "D(A)": cert.rank_D, "M(A)": cert.rank_M}
    statements = [
        Statement("rank(A + A^2) + rank(A - A^2) = rank D(A) + rank M(A)", cert.identity_holds()),
    ]
    if spec.characteristic != 2:
        t = _RankTable(A)
        literal = (t.rank("A + A^2", [0, 1, 1]) + t.rank("A - A^2", [0, 1, -1])
                   == t.rank("A", [0, 1]) + t.rank("A - A^3", [0, 1, 0, -1]))
        statements.append(Statement("rank(A + A^2) + rank(A - A^2) = rank A + rank(A - A^3)", literal))
        ranks.update(t.used)
    direct = bool(verify_certificate(cert))
    return ClassificationReport(PropertyKind.RANK_IDENTITY_APP5, spec, n, statements, direct, ranks)


def classify(
    A: DenseMatrix,
    property_name: Union[str, PropertyKind],
    factors: Optional[List[DensePolynomial]] = None
) -> ClassificationReport:
    """
    Dispatch to the classifier for a property name.

    Args:
        A: Square matrix
        property_name: One of PROPERTY_NAMES or a PropertyKind
        factors: Required for 'charfactors', rejected otherwise

    Raises:
        ValueError: On an unknown property or misplaced factors
    """
    try:
        kind = property_name if isinstance(property_name, PropertyKind) else PropertyKind(property_name)
    except ValueError:
        raise ValueError(f"Unknown property '{property_name}' (choose from {', '.join(PROPERTY_NAMES)})") from None

    if kind == PropertyKind.CHAR_FACTOR_RANK_SUM:
        if not factors:
            raise ValueError("The charfactors property needs --factors")
        report = charfactor_rank_sum(A, factors)
    else:
        if factors:
            raise ValueError(f"--factors only applies to charfactors, not {kind.value}")
        report = {
            PropertyKind.IDEMPOTENT: classify_idempotent,
            PropertyKind.INVOLUTIVE: classify_involutive,
            PropertyKind.TRIPOTENT: classify_tripotent,
            PropertyKind.A3_EQUALS_A5: classify_a3a5,
            PropertyKind.RANK_IDENTITY_APP5: rank_identity_app5,
        }[kind](A)

    logger.debug(f"{kind.value} over {A.domain}, n={A.nrows}: direct={report.direct_check}, "
                 f"consistent={report.consistent}")
    return report
