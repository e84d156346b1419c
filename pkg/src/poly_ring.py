"""
Polynomial Ring module for RANK FLOW.

Dense univariate polynomials over a FieldSpec: ring operations, long division,
monic gcd/lcm and the extended Euclidean algorithm producing the Bezout
certificate (D, M, phi1, phi2, psi1, psi2) used by the rank theorem.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from src.error_handler import DivisionByZero, DomainMismatch, NotMonic
from src.field_core import FieldScalar, FieldSpec, RawValue, inv

logger = logging.getLogger(__name__)

# degree of the zero polynomial
ZERO_DEGREE = float('-inf')


@dataclass(frozen=True)
class DensePolynomial:
    """
    Polynomial with ascending coefficients: coeffs[i] multiplies X**i.

    The highest coefficient is nonzero; the zero polynomial has no
    coefficients. Build instances with from_values() to get the trailing
    zeros stripped.
    """
    domain: FieldSpec
    coeffs: Tuple[FieldScalar, ...] = ()

    def __post_init__(self):
        for c in self.coeffs:
            if c.domain != self.domain:
                raise DomainMismatch(f"Coefficient over {c.domain} in polynomial over {self.domain}")
        if self.coeffs and self.coeffs[-1].is_zero():
            raise ValueError("Polynomial has a zero leading coefficient; use from_values()")

    @classmethod
    def from_values(
        cls,
        values: Iterable[Union[int, RawValue, FieldScalar]],
        spec: FieldSpec
    ) -> 'DensePolynomial':
        """
        Canonical polynomial from ascending coefficients.

        Args:
            values: ints, Fractions or FieldScalars, lowest degree first
            spec: Coefficient field

        Returns:
            DensePolynomial with trailing zeros removed
        """
        coeffs = [spec.element(v) for v in values]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return cls(spec, tuple(coeffs))

    @classmethod
    def zero(cls, spec: FieldSpec) -> 'DensePolynomial':
        return cls(spec, ())

    @classmethod
    def constant(cls, value: Union[int, RawValue, FieldScalar], spec: FieldSpec) -> 'DensePolynomial':
        return cls.from_values([value], spec)

    @classmethod
    def monomial(cls, degree: int, spec: FieldSpec, coefficient: Union[int, RawValue, FieldScalar] = 1) -> 'DensePolynomial':
        """coefficient * X**degree."""
        return cls.from_values([0] * degree + [coefficient], spec)

    @property
    def degree(self) -> Union[int, float]:
        """len(coeffs) - 1, or ZERO_DEGREE for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def leading_coefficient(self) -> FieldScalar:
        if not self.coeffs:
            return self.domain.zero()
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    def coefficient(self, i: int) -> FieldScalar:
        """Coefficient of X**i (zero beyond the degree)."""
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.domain.zero()

    def values(self) -> List[RawValue]:
        """Raw coefficient values, ascending."""
        return [c.value for c in self.coeffs]

    def __add__(self, other: 'DensePolynomial') -> 'DensePolynomial':
        return poly_add(self, other)

    def __sub__(self, other: 'DensePolynomial') -> 'DensePolynomial':
        return poly_sub(self, other)

    def __mul__(self, other: 'DensePolynomial') -> 'DensePolynomial':
        return poly_mul(self, other)

    def __neg__(self) -> 'DensePolynomial':
        return poly_neg(self)

    def __call__(self, x: FieldScalar) -> FieldScalar:
        return poly_eval(self, x)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        text = ""
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            # GF(p) residues are never negative
            negative = not self.domain.is_prime_field and c.value < 0
            magnitude = -c if negative else c
            if i == 0:
                term = magnitude.format_value()
            else:
                power = "x" if i == 1 else f"x^{i}"
                term = power if magnitude.is_one() else f"{magnitude.format_value()}*{power}"
            if not text:
                text = f"-{term}" if negative else term
            else:
                text += f" - {term}" if negative else f" + {term}"
        return text


@dataclass(frozen=True)
class BezoutCertificate:
    """
    Extended gcd data for a pair (f, g).

    Exact relations:
        f*phi1 + phi2*g == D
        g == psi1*D and f == D*psi2
        lcm_scale * M * D == f * g     (M and D monic, or zero)
    """
    f: DensePolynomial
    g: DensePolynomial
    D: DensePolynomial
    M: DensePolynomial
    phi1: DensePolynomial
    phi2: DensePolynomial
    psi1: DensePolynomial
    psi2: DensePolynomial
    lcm_scale: FieldScalar

    @property
    def domain(self) -> FieldSpec:
        return self.f.domain

    def is_coprime(self) -> bool:
        return self.D.degree == 0


def _shared_domain(*polys: DensePolynomial) -> FieldSpec:
    spec = polys[0].domain
    for p in polys[1:]:
        if p.domain != spec:
            raise DomainMismatch(f"Cannot combine polynomials over {spec} and {p.domain}")
    return spec


def poly_add(p: DensePolynomial, q: DensePolynomial) -> DensePolynomial:
    """Sum of two polynomials."""
    spec = _shared_domain(p, q)
    length = max(len(p.coeffs), len(q.coeffs))
    return DensePolynomial.from_values(
        (p.coefficient(i) + q.coefficient(i) for i in range(length)), spec
    )


def poly_neg(p: DensePolynomial) -> DensePolynomial:
    """Additive inverse."""
    return DensePolynomial(p.domain, tuple(-c for c in p.coeffs))


def poly_sub(p: DensePolynomial, q: DensePolynomial) -> DensePolynomial:
    """p - q."""
    return poly_add(p, poly_neg(q))


def poly_mul(p: DensePolynomial, q: DensePolynomial) -> DensePolynomial:
    """Schoolbook product."""
    spec = _shared_domain(p, q)
    if p.is_zero() or q.is_zero():
        return DensePolynomial.zero(spec)
    result = [spec.zero()] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(q.coeffs):
            result[i + j] = result[i + j] + a * b
    return DensePolynomial.from_values(result, spec)


def poly_scale(p: DensePolynomial, c: FieldScalar) -> DensePolynomial:
    """c * p for a scalar c."""
    return DensePolynomial.from_values((c * a for a in p.coeffs), p.domain)


def poly_monic(p: DensePolynomial) -> DensePolynomial:
    """Monic associate of p; the zero polynomial stays zero."""
    if p.is_zero():
        return p
    return poly_scale(p, inv(p.leading_coefficient))


def poly_product(factors: Sequence[DensePolynomial], spec: FieldSpec) -> DensePolynomial:
    """Product of a sequence of polynomials (1 for an empty sequence)."""
    result = DensePolynomial.constant(1, spec)
    for factor in factors:
        result = poly_mul(result, factor)
    return result


def poly_eval(p: DensePolynomial, x: FieldScalar) -> FieldScalar:
    """Horner evaluation at a scalar."""
    result = p.domain.zero()
    for c in reversed(p.coeffs):
        result = result * x + c
    return result


def poly_divmod(p: DensePolynomial, q: DensePolynomial) -> Tuple[DensePolynomial, DensePolynomial]:
    """
    Long division p = q*quotient + remainder with deg(remainder) < deg(q).

    Raises:
        DivisionByZero: If q is the zero polynomial
    """
    spec = _shared_domain(p, q)
    if q.is_zero():
        raise DivisionByZero("Polynomial division by zero")
    if p.degree < q.degree:
        return DensePolynomial.zero(spec), p

    remainder = list(p.coeffs)
    dq = len(q.coeffs) - 1
    lead_inv = inv(q.leading_coefficient)
    quotient = [spec.zero()] * (len(p.coeffs) - dq)
    for k in range(len(quotient) - 1, -1, -1):
        c = remainder[k + dq] * lead_inv
        quotient[k] = c
        if c.is_zero():
            continue
        for j, b in enumerate(q.coeffs):
            remainder[k + j] = remainder[k + j] - c * b
    return (
        DensePolynomial.from_values(quotient, spec),
        DensePolynomial.from_values(remainder[:dq], spec),
    )


def poly_xgcd(f: DensePolynomial, g: DensePolynomial) -> BezoutCertificate:
    """
    Extended Euclid: monic D = gcd(f, g), Bezout pair (phi1, phi2) with
    f*phi1 + phi2*g = D, cofactors psi1 = g/D and psi2 = f/D, and the monic
    lcm M together with the scalar c such that psi1*f = c*M.

    Zero conventions: D(f, 0) = monic(f), M(f, 0) = 0, D(0, 0) = M(0, 0) = 0.
    """
    spec = _shared_domain(f, g)
    zero = DensePolynomial.zero(spec)
    one = DensePolynomial.constant(1, spec)

    if f.is_zero() and g.is_zero():
        return BezoutCertificate(f, g, zero, zero, zero, zero, zero, zero, spec.one())

    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))

    lead_inv = inv(r0.leading_coefficient)
    D = poly_scale(r0, lead_inv)
    phi1 = poly_scale(s0, lead_inv)
    phi2 = poly_scale(t0, lead_inv)

    psi1, _ = poly_divmod(g, D)
    psi2, _ = poly_divmod(f, D)

    lcm_full = poly_mul(psi1, f)
    if lcm_full.is_zero():
        M, scale = zero, spec.one()
    else:
        scale = lcm_full.leading_coefficient
        M = poly_scale(lcm_full, inv(scale))

    logger.debug(f"xgcd over {spec}: deg f={f.degree}, deg g={g.degree}, deg D={D.degree}, deg M={M.degree}")
    return BezoutCertificate(f, g, D, M, phi1, phi2, psi1, psi2, scale)


def poly_gcd(f: DensePolynomial, g: DensePolynomial) -> DensePolynomial:
    """Monic greatest common divisor."""
    return poly_xgcd(f, g).D


def poly_lcm(f: DensePolynomial, g: DensePolynomial) -> DensePolynomial:
    """Monic lowest common multiple (zero if f or g is zero)."""
    return poly_xgcd(f, g).M


def poly_coprime(f: DensePolynomial, g: DensePolynomial) -> bool:
    """True iff gcd(f, g) = 1."""
    return poly_gcd(f, g).degree == 0


def pairwise_coprime(factors: Sequence[DensePolynomial]) -> bool:
    """
    True iff every unordered pair of factors is coprime.

    Raises:
        ValueError: If factors is empty
        DomainMismatch: If the factors live over different fields
    """
    if not factors:
        raise ValueError("pairwise_coprime needs at least one factor")
    _shared_domain(*factors)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if not poly_coprime(factors[i], factors[j]):
                return False
    return True


def require_monic(p: DensePolynomial) -> None:
    """Raise NotMonic unless p is monic."""
    if not p.is_monic():
        raise NotMonic(f"Polynomial {p} is not monic")
