"""
Field Core module for RANK FLOW.

Exact scalar arithmetic over the two supported coefficient domains: the
rationals (reduced fractions) and prime fields GF(p) with p < 2**31.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from src.error_handler import BadField, DivisionByZero, DomainMismatch, ParseError

logger = logging.getLogger(__name__)

MODULUS_BOUND = 2 ** 31
INT64_LIMIT = 2 ** 63

# Witnesses 2, 3, 5, 7 are exact below 3_215_031_751 > 2**31.
_MILLER_RABIN_BASES = (2, 3, 5, 7)

_INTEGER_RE = re.compile(r'^[+-]?\d+$')
_FRACTION_RE = re.compile(r'^[+-]?\d+/\d+$')

RawValue = Union[int, Fraction]


def is_probable_prime(n: int) -> bool:
    """
    Deterministic Miller-Rabin primality test for the 31-bit range.

    Args:
        n: Integer to test

    Returns:
        True iff n is prime (exact for n < 3_215_031_751)
    """
    if n < 2:
        return False
    for small in _MILLER_RABIN_BASES:
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _mod_inverse(value: int, modulus: int) -> int:
    """Inverse of value mod modulus by the extended Euclidean algorithm."""
    old_r, r = value % modulus, modulus
    old_s, s = 1, 0
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise DivisionByZero(f"{value} has no inverse modulo {modulus}")
    return old_s % modulus


class FieldKind(Enum):
    """Supported coefficient domains."""
    RATIONALS = "rationals"
    PRIME_FIELD = "prime_field"


@dataclass(frozen=True)
class FieldSpec:
    """
    A coefficient field: Q, or GF(p) for a prime 2 <= p < 2**31.

    Use FieldSpec.rationals(), FieldSpec.prime(p) or FieldSpec.parse(text);
    the constructor validates the modulus either way.
    """
    kind: FieldKind
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind == FieldKind.RATIONALS:
            if self.modulus is not None:
                raise BadField("Q takes no modulus")
            return
        if self.modulus is None or isinstance(self.modulus, bool) or not isinstance(self.modulus, int):
            raise BadField(f"Prime field needs an integer modulus, got {self.modulus!r}")
        if not 2 <= self.modulus < MODULUS_BOUND:
            raise BadField(f"Modulus {self.modulus} outside [2, 2^31)")
        if not is_probable_prime(self.modulus):
            raise BadField(f"Modulus {self.modulus} is not prime")

    @classmethod
    def rationals(cls) -> 'FieldSpec':
        """The field of rational numbers."""
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> 'FieldSpec':
        """The prime field GF(p)."""
        return cls(FieldKind.PRIME_FIELD, p)

    @classmethod
    def parse(cls, text: str) -> 'FieldSpec':
        """
        Parse a field selection string.

        Args:
            text: "Q" or a decimal prime such as "7"

        Returns:
            FieldSpec for the named field

        Raises:
            BadField: If the text names neither Q nor a supported prime
        """
        token = str(text).strip()
        if token in ("Q", "q"):
            return cls.rationals()
        if not token.isdigit():
            raise BadField(f"Field must be 'Q' or a decimal prime, got {text!r}")
        return cls.prime(int(token))

    @property
    def is_prime_field(self) -> bool:
        return self.kind == FieldKind.PRIME_FIELD

    @property
    def characteristic(self) -> int:
        """0 for Q, p for GF(p)."""
        return self.modulus if self.is_prime_field else 0

    @property
    def label(self) -> str:
        """Field selection string ("Q" or "p")."""
        return str(self.modulus) if self.is_prime_field else "Q"

    def __str__(self) -> str:
        return f"GF({self.modulus})" if self.is_prime_field else "Q"

    # Raw value kernels: canonical ints in [0, p) or reduced Fractions.

    def coerce(self, value: Union[int, Fraction, 'FieldScalar']) -> RawValue:
        """
        Canonical raw value of an int, Fraction or FieldScalar.

        Raises:
            DomainMismatch: If a FieldScalar from another field is given
            DivisionByZero: If a fraction's denominator is not invertible mod p
        """
        if isinstance(value, FieldScalar):
            if value.domain != self:
                raise DomainMismatch(f"Scalar over {value.domain} used in {self}")
            return value.value
        if self.is_prime_field:
            if isinstance(value, Fraction):
                return value.numerator * _mod_inverse(value.denominator, self.modulus) % self.modulus
            return int(value) % self.modulus
        return Fraction(value)

    def inverse_value(self, value: RawValue) -> RawValue:
        """Multiplicative inverse of a raw value."""
        if value == 0:
            raise DivisionByZero("Inverse of zero")
        if self.is_prime_field:
            return _mod_inverse(value, self.modulus)
        return 1 / value

    def reduce_array(self, array: np.ndarray) -> np.ndarray:
        """Bring an array of raw values back to canonical form."""
        if self.is_prime_field:
            return array % self.modulus
        return array

    def array_dtype(self):
        """numpy dtype used to store matrix entries."""
        return np.int64 if self.is_prime_field else object

    def matmul_arrays(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """
        Exact product of two raw-value arrays.

        GF(p) uses int64 when the inner products cannot overflow, Python ints
        otherwise.
        """
        if not self.is_prime_field:
            return left.dot(right)
        inner = left.shape[1]
        if inner * (self.modulus - 1) ** 2 < INT64_LIMIT:
            return left.dot(right) % self.modulus
        product = left.astype(object).dot(right.astype(object)) % self.modulus
        return product.astype(np.int64)

    def zero(self) -> 'FieldScalar':
        return FieldScalar(self, self.coerce(0))

    def one(self) -> 'FieldScalar':
        return FieldScalar(self, self.coerce(1))

    def element(self, value: Union[int, Fraction, 'FieldScalar']) -> 'FieldScalar':
        """Canonical FieldScalar for an int, Fraction or scalar."""
        return FieldScalar(self, self.coerce(value))


@dataclass(frozen=True)
class FieldScalar:
    """An element of a FieldSpec in canonical form."""
    domain: FieldSpec
    value: RawValue

    def __post_init__(self):
        if self.domain.is_prime_field:
            if not isinstance(self.value, int) or not 0 <= self.value < self.domain.modulus:
                raise ValueError(f"{self.value!r} is not a canonical residue mod {self.domain.modulus}")
        elif not isinstance(self.value, Fraction):
            raise ValueError(f"{self.value!r} is not a Fraction")

    @classmethod
    def parse(cls, text: str, spec: FieldSpec) -> 'FieldScalar':
        """
        Parse an entry: "a" or "a/b" over Q, a decimal integer over GF(p).

        Raises:
            ParseError: On malformed text or a zero denominator
        """
        token = text.strip()
        if _INTEGER_RE.match(token):
            return from_integer(int(token), spec)
        if _FRACTION_RE.match(token) and not spec.is_prime_field:
            numerator, denominator = token.split('/')
            if int(denominator) == 0:
                raise ParseError(f"Zero denominator in {text!r}")
            return FieldScalar(spec, Fraction(int(numerator), int(denominator)))
        raise ParseError(f"Invalid {spec} entry {text!r}")

    def format_value(self) -> str:
        """Text form used by files, flags and JSON."""
        if self.domain.is_prime_field:
            return str(self.value)
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __add__(self, other: 'FieldScalar') -> 'FieldScalar':
        return add(self, other)

    def __sub__(self, other: 'FieldScalar') -> 'FieldScalar':
        return sub(self, other)

    def __mul__(self, other: 'FieldScalar') -> 'FieldScalar':
        return mul(self, other)

    def __truediv__(self, other: 'FieldScalar') -> 'FieldScalar':
        return div(self, other)

    def __neg__(self) -> 'FieldScalar':
        return neg(self)

    def __str__(self) -> str:
        return self.format_value()


def _check_domains(a: FieldScalar, b: FieldScalar) -> FieldSpec:
    if a.domain != b.domain:
        raise DomainMismatch(f"Cannot combine {a.domain} and {b.domain} scalars")
    return a.domain


def add(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    """Canonical sum of two scalars over the same field."""
    spec = _check_domains(a, b)
    if spec.is_prime_field:
        return FieldScalar(spec, (a.value + b.value) % spec.modulus)
    return FieldScalar(spec, a.value + b.value)


def mul(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    """Canonical product of two scalars over the same field."""
    spec = _check_domains(a, b)
    if spec.is_prime_field:
        return FieldScalar(spec, a.value * b.value % spec.modulus)
    return FieldScalar(spec, a.value * b.value)


def neg(a: FieldScalar) -> FieldScalar:
    """Additive inverse."""
    if a.domain.is_prime_field:
        return FieldScalar(a.domain, -a.value % a.domain.modulus)
    return FieldScalar(a.domain, -a.value)


def sub(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    """a - b over a shared field."""
    return add(a, neg(b))


def inv(a: FieldScalar) -> FieldScalar:
    """
    Multiplicative inverse.

    Raises:
        DivisionByZero: If a is zero
    """
    return FieldScalar(a.domain, a.domain.inverse_value(a.value))


def div(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    """a / b over a shared field."""
    _check_domains(a, b)
    return mul(a, inv(b))


def from_integer(k: int, spec: FieldSpec) -> FieldScalar:
    """Image of an integer in the field (reduced mod p in GF(p))."""
    return FieldScalar(spec, spec.coerce(int(k)))


def equals(a: FieldScalar, b: FieldScalar) -> bool:
    """Exact equality of two scalars over the same field."""
    _check_domains(a, b)
    return a.value == b.value
