"""
Rank Theorem module for RANK FLOW.

Builds and re-verifies the constructive certificate of

    rank f(A) + rank g(A) = rank D(A) + rank M(A)

where D and M are the monic gcd and lcm of f and g. The certificate stores the
block matrices B = diag(f(A), g(A)) and C = [[0, D(A)], [-M(A), 0]] together
with the four unit block-triangular transforms satisfying C = L2*L1*B*C1*C2.
The corollary predicates return EquivalenceCheck records whose two sides are
computed independently.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional

from src.error_handler import (
    AlgebraError, BothZero, DimensionMismatch, DomainMismatch, NotCoprime
)
from src.exact_matrix import (
    DenseMatrix, block2x2, block_of, companion, horner_eval, mat_identity,
    mat_mul, mat_neg, mat_rank, mat_scale, mat_zero
)
from src.field_core import FieldScalar, FieldSpec, inv
from src.matrix_io import (
    matrix_from_entries, matrix_to_entries, poly_from_entries, poly_to_entries
)
from src.poly_ring import (
    BezoutCertificate, DensePolynomial, poly_coprime, poly_scale, poly_xgcd
)
from src.schemas import CertificateDocument
from src.spectral_poly import min_poly, poly_divides

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RankIdentityCertificate:
    """
    Everything needed to re-check one instance of the rank identity.

    fA, gA, DA, MA are n x n; B, C and the transforms C1, C2, L1, L2 are
    2n x 2n. rank_B and rank_C are the ranks of B and C as computed at build
    time.
    """
    A: DenseMatrix
    bezout: BezoutCertificate
    fA: DenseMatrix
    gA: DenseMatrix
    DA: DenseMatrix
    MA: DenseMatrix
    B: DenseMatrix
    C: DenseMatrix
    C1: DenseMatrix
    C2: DenseMatrix
    L1: DenseMatrix
    L2: DenseMatrix
    rank_f: int
    rank_g: int
    rank_D: int
    rank_M: int
    rank_B: int
    rank_C: int

    @property
    def domain(self) -> FieldSpec:
        return self.A.domain

    @property
    def n(self) -> int:
        return self.A.nrows

    def identity_holds(self) -> bool:
        return self.rank_f + self.rank_g == self.rank_D + self.rank_M


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of verify_certificate; truthy iff every invariant holds."""
    ok: bool
    failed: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class CheckMode(Enum):
    """How the two sides of a corollary check are related."""
    EQUIVALENCE = "equivalence"
    IMPLICATION = "implication"


@dataclass(frozen=True)
class EquivalenceCheck:
    """
    Two independently computed booleans and the contract linking them.

    For EQUIVALENCE the contract is lhs == rhs; for IMPLICATION it is
    rhs => lhs. Unpacks as (lhs, rhs).
    """
    contract: str
    lhs: bool
    rhs: bool
    mode: CheckMode = CheckMode.EQUIVALENCE
    ranks: Dict[str, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        if self.mode == CheckMode.IMPLICATION:
            return self.lhs or not self.rhs
        return self.lhs == self.rhs

    def __iter__(self) -> Iterator[bool]:
        yield self.lhs
        yield self.rhs


def _check_inputs(A: DenseMatrix, *polys: DensePolynomial) -> None:
    if not A.is_square():
        raise DimensionMismatch(f"Square matrix required, got {A.nrows}x{A.ncols}")
    for p in polys:
        if p.domain != A.domain:
            raise DomainMismatch(f"Polynomial over {p.domain} used with matrix over {A.domain}")


def _transforms(A: DenseMatrix, bezout: BezoutCertificate) -> Dict[str, DenseMatrix]:
    """C1, C2, L1, L2 for the given Bezout data."""
    spec = A.domain
    n = A.nrows
    identity = mat_identity(n, spec)
    zero = mat_zero(n, n, spec)
    scale_inv = inv(bezout.lcm_scale)
    psi2A = horner_eval(bezout.psi2, A)
    return {
        'C1': block2x2(identity, horner_eval(bezout.phi1, A), zero, identity),
        'L1': block2x2(identity, horner_eval(bezout.phi2, A), zero, identity),
        'C2': block2x2(mat_scale(identity, scale_inv), zero, mat_neg(mat_scale(psi2A, scale_inv)), identity),
        'L2': block2x2(identity, zero, mat_neg(horner_eval(bezout.psi1, A)), identity),
    }


def build_certificate(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> RankIdentityCertificate:
    """
    Construct the rank identity certificate for (A, f, g).

    Args:
        A: Square matrix
        f: First polynomial, over A's field
        g: Second polynomial, over A's field

    Returns:
        RankIdentityCertificate with all blocks and ranks filled in

    Raises:
        DimensionMismatch: If A is not square
        DomainMismatch: If f, g and A do not share a field
    """
    _check_inputs(A, f, g)
    spec = A.domain
    n = A.nrows
    bezout = poly_xgcd(f, g)

    fA = horner_eval(f, A)
    gA = horner_eval(g, A)
    DA = horner_eval(bezout.D, A)
    MA = horner_eval(bezout.M, A)
    zero = mat_zero(n, n, spec)

    B = block2x2(fA, zero, zero, gA)
    C = block2x2(zero, DA, mat_neg(MA), zero)
    transforms = _transforms(A, bezout)

    certificate = RankIdentityCertificate(
        A=A, bezout=bezout, fA=fA, gA=gA, DA=DA, MA=MA, B=B, C=C,
        C1=transforms['C1'], C2=transforms['C2'], L1=transforms['L1'], L2=transforms['L2'],
        rank_f=mat_rank(fA), rank_g=mat_rank(gA), rank_D=mat_rank(DA), rank_M=mat_rank(MA),
        rank_B=mat_rank(B), rank_C=mat_rank(C),
    )
    logger.debug(
        f"certificate over {spec}, n={n}: {certificate.rank_f} + {certificate.rank_g} = "
        f"{certificate.rank_D} + {certificate.rank_M}"
    )
    return certificate


def verify_certificate(cert: RankIdentityCertificate) -> VerificationResult:
    """
    Re-check every invariant of a certificate from scratch.

    Polynomial matrices are re-evaluated from cert.A and the Bezout data and
    all ranks are recomputed; nothing stored in the certificate is trusted
    except as the thing being compared against.

    Returns:
        VerificationResult listing the names of the invariants that failed
    """
    failed: List[str] = []

    def check(name: str, predicate: Callable[[], bool]) -> None:
        try:
            ok = bool(predicate())
        except (AlgebraError, ValueError) as e:
            logger.debug(f"invariant {name} raised {type(e).__name__}: {e}")
            ok = False
        if not ok:
            failed.append(name)

    A = cert.A
    bz = cert.bezout
    f, g, D, M = bz.f, bz.g, bz.D, bz.M

    check('bezout_identity', lambda: f * bz.phi1 + bz.phi2 * g == D)
    check('cofactor_f', lambda: D * bz.psi2 == f)
    check('cofactor_g', lambda: bz.psi1 * D == g)
    check('gcd_monic', lambda: D.is_monic() or (D.is_zero() and f.is_zero() and g.is_zero()))
    check('lcm_monic', lambda: M.is_monic() or (M.is_zero() and (f.is_zero() or g.is_zero())))
    check('lcm_associate', lambda: not bz.lcm_scale.is_zero() and poly_scale(M * D, bz.lcm_scale) == f * g)

    try:
        fA, gA = horner_eval(f, A), horner_eval(g, A)
        DA, MA = horner_eval(D, A), horner_eval(M, A)
        phi1A, phi2A = horner_eval(bz.phi1, A), horner_eval(bz.phi2, A)
        psi1A, psi2A = horner_eval(bz.psi1, A), horner_eval(bz.psi2, A)
        transforms = _transforms(A, bz)
    except (AlgebraError, ValueError) as e:
        # nothing below can be evaluated
        logger.warning(f"certificate cannot be re-evaluated: {e}")
        return VerificationResult(ok=False, failed=failed + ['evaluation'])

    n = A.nrows
    zero = mat_zero(n, n, A.domain)

    check('evaluation_f', lambda: cert.fA == fA)
    check('evaluation_g', lambda: cert.gA == gA)
    check('evaluation_D', lambda: cert.DA == DA)
    check('evaluation_M', lambda: cert.MA == MA)
    check('eq2_instance', lambda: mat_mul(fA, phi1A) + mat_mul(phi2A, gA) == DA)
    check('cofactor_instances', lambda: gA == mat_mul(psi1A, DA) and fA == mat_mul(DA, psi2A))
    check('block_B', lambda: cert.B == block2x2(fA, zero, zero, gA))
    check('block_C', lambda: cert.C == block2x2(zero, DA, mat_neg(MA), zero))
    for name in ('C1', 'C2', 'L1', 'L2'):
        check(f'transform_{name}', lambda name=name: getattr(cert, name) == transforms[name])
    check('factorization', lambda: cert.L2 @ cert.L1 @ cert.B @ cert.C1 @ cert.C2 == cert.C)

    check('rank_f', lambda: mat_rank(fA) == cert.rank_f)
    check('rank_g', lambda: mat_rank(gA) == cert.rank_g)
    check('rank_D', lambda: mat_rank(DA) == cert.rank_D)
    check('rank_M', lambda: mat_rank(MA) == cert.rank_M)
    check('rank_B', lambda: mat_rank(cert.B) == cert.rank_B == cert.rank_f + cert.rank_g)
    check('rank_C', lambda: mat_rank(cert.C) == cert.rank_C == cert.rank_D + cert.rank_M)
    check('rank_identity', cert.identity_holds)

    if failed:
        logger.warning(f"certificate verification failed: {', '.join(failed)}")
    return VerificationResult(ok=not failed, failed=failed)


def corollary1_check(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> EquivalenceCheck:
    """
    rank f(A) + rank g(A) = rank D(A)  <=>  M(A) = 0.

    Returns:
        EquivalenceCheck (lhs_holds, M_annihilates)
    """
    _check_inputs(A, f, g)
    bezout = poly_xgcd(f, g)
    ranks = {
        'f': mat_rank(horner_eval(f, A)),
        'g': mat_rank(horner_eval(g, A)),
        'D': mat_rank(horner_eval(bezout.D, A)),
    }
    lhs = ranks['f'] + ranks['g'] == ranks['D']
    rhs = horner_eval(bezout.M, A).is_zero()
    return EquivalenceCheck('corollary1', lhs, rhs, ranks=ranks)


def corollary1prime_check(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> EquivalenceCheck:
    """
    rank f(A) + rank g(A) = rank D(A)  <=>  m_A divides M.

    Returns:
        EquivalenceCheck (lhs_holds, minpoly_divides)
    """
    _check_inputs(A, f, g)
    bezout = poly_xgcd(f, g)
    ranks = {
        'f': mat_rank(horner_eval(f, A)),
        'g': mat_rank(horner_eval(g, A)),
        'D': mat_rank(horner_eval(bezout.D, A)),
    }
    lhs = ranks['f'] + ranks['g'] == ranks['D']
    rhs = poly_divides(min_poly(A), bezout.M)
    return EquivalenceCheck('corollary1prime', lhs, rhs, ranks=ranks)


def _corollary2_ranks(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> Dict[str, int]:
    fA = horner_eval(f, A)
    gA = horner_eval(g, A)
    return {'fg': mat_rank(mat_mul(fA, gA)), 'f': mat_rank(fA), 'g': mat_rank(gA)}


def corollary2_relation(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> bool:
    """rank f(A)g(A) + n == rank f(A) + rank g(A)."""
    _check_inputs(A, f, g)
    ranks = _corollary2_ranks(A, f, g)
    return ranks['fg'] + A.nrows == ranks['f'] + ranks['g']


def corollary2_check(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> EquivalenceCheck:
    """
    Forward direction of the coprime rank relation: gcd(f, g) = 1 implies
    rank f(A)g(A) + n = rank f(A) + rank g(A).

    Returns:
        EquivalenceCheck (relation_holds, coprime) in IMPLICATION mode
    """
    _check_inputs(A, f, g)
    ranks = _corollary2_ranks(A, f, g)
    lhs = ranks['fg'] + A.nrows == ranks['f'] + ranks['g']
    return EquivalenceCheck('corollary2', lhs, poly_coprime(f, g), mode=CheckMode.IMPLICATION, ranks=ranks)


def coprimality_witness(f: DensePolynomial, g: DensePolynomial) -> Optional[DenseMatrix]:
    """
    A matrix violating the coprime rank relation, or None if f, g are coprime.

    The witness is companion(D): both f and g vanish on it, so
    rank f(A)g(A) + d = d while rank f(A) + rank g(A) = 0.

    Raises:
        BothZero: If f and g are both zero
    """
    if f.is_zero() and g.is_zero():
        raise BothZero("coprimality witness needs a nonzero polynomial")
    bezout = poly_xgcd(f, g)
    if bezout.is_coprime():
        return None
    return companion(bezout.D)


def corollary3_check(A: DenseMatrix, f: DensePolynomial, g: DensePolynomial) -> EquivalenceCheck:
    """
    For coprime f, g: f(A)g(A) = 0  <=>  rank f(A) + rank g(A) = n.

    Returns:
        EquivalenceCheck (product_zero, ranks_sum_to_n)

    Raises:
        NotCoprime: If gcd(f, g) != 1
    """
    _check_inputs(A, f, g)
    if not poly_coprime(f, g):
        raise NotCoprime(f"gcd({f}, {g}) is not 1")
    fA = horner_eval(f, A)
    gA = horner_eval(g, A)
    ranks = {'f': mat_rank(fA), 'g': mat_rank(gA)}
    lhs = mat_mul(fA, gA).is_zero()
    rhs = ranks['f'] + ranks['g'] == A.nrows
    return EquivalenceCheck('corollary3', lhs, rhs, ranks=ranks)


def certificate_to_document(cert: RankIdentityCertificate, verified: Optional[bool] = None) -> CertificateDocument:
    """
    JSON document for a certificate.

    Args:
        cert: Certificate to export
        verified: Stored "verified" flag; computed with verify_certificate if None
    """
    if verified is None:
        verified = bool(verify_certificate(cert))
    bz = cert.bezout
    return CertificateDocument(
        field=cert.domain.label,
        n=cert.n,
        A=matrix_to_entries(cert.A),
        f=poly_to_entries(bz.f), g=poly_to_entries(bz.g),
        D=poly_to_entries(bz.D), M=poly_to_entries(bz.M),
        phi1=poly_to_entries(bz.phi1), phi2=poly_to_entries(bz.phi2),
        psi1=poly_to_entries(bz.psi1), psi2=poly_to_entries(bz.psi2),
        lcm_scale=bz.lcm_scale.format_value(),
        B=matrix_to_entries(cert.B), C=matrix_to_entries(cert.C),
        C1=matrix_to_entries(cert.C1), C2=matrix_to_entries(cert.C2),
        L1=matrix_to_entries(cert.L1), L2=matrix_to_entries(cert.L2),
        ranks={'f': cert.rank_f, 'g': cert.rank_g, 'D': cert.rank_D, 'M': cert.rank_M,
               'B': cert.rank_B, 'C': cert.rank_C},
        verified=verified,
    )


def certificate_from_document(doc: CertificateDocument) -> RankIdentityCertificate:
    """
    Rebuild a certificate from its JSON document without recomputing anything.

    fA and gA are read from the diagonal blocks of B, D(A) from the upper
    right block of C and M(A) from the negated lower left block. Run
    verify_certificate on the result to re-check it.

    Raises:
        BadField, ParseError, DimensionMismatch: On a malformed document
    """
    spec = FieldSpec.parse(doc.field)
    A = matrix_from_entries(doc.A, spec)
    if A.shape != (doc.n, doc.n):
        raise DimensionMismatch(f"Document declares n={doc.n} but A is {A.nrows}x{A.ncols}")
    polys = {name: poly_from_entries(getattr(doc, name), spec)
             for name in ('f', 'g', 'D', 'M', 'phi1', 'phi2', 'psi1', 'psi2')}
    bezout = BezoutCertificate(lcm_scale=FieldScalar.parse(doc.lcm_scale, spec), **polys)
    blocks = {name: matrix_from_entries(getattr(doc, name), spec)
              for name in ('B', 'C', 'C1', 'C2', 'L1', 'L2')}
    for name, block in blocks.items():
        if block.shape != (2 * doc.n, 2 * doc.n):
            raise DimensionMismatch(f"{name} is {block.nrows}x{block.ncols}, expected {2 * doc.n}x{2 * doc.n}")

    ranks = doc.ranks
    return RankIdentityCertificate(
        A=A, bezout=bezout,
        fA=block_of(blocks['B'], 0, 0), gA=block_of(blocks['B'], 1, 1),
        DA=block_of(blocks['C'], 0, 1), MA=mat_neg(block_of(blocks['C'], 1, 0)),
        rank_f=ranks.get('f', 0), rank_g=ranks.get('g', 0),
        rank_D=ranks.get('D', 0), rank_M=ranks.get('M', 0),
        rank_B=ranks.get('B', ranks.get('f', 0) + ranks.get('g', 0)),
        rank_C=ranks.get('C', ranks.get('D', 0) + ranks.get('M', 0)),
        **blocks,
    )
