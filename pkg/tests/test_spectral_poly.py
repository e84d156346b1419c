"""
Unit tests for Spectral Polynomial module.

Characteristic polynomials are compared with a Leibniz expansion of
det(xI - A); minimal polynomials are checked for annihilation and, over
small prime fields, minimality by enumerating every monic polynomial of
lower degree.
"""
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.error_handler import DimensionMismatch, DivisionByZero
from src.exact_matrix import DenseMatrix, companion, horner_eval, mat_diagonal, mat_identity, mat_zero
from src.field_core import FieldSpec
from src.poly_ring import DensePolynomial, poly_product
from src.spectral_poly import char_poly, min_poly, poly_divides, spectral_data

GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)
GF7 = FieldSpec.prime(7)
Q = FieldSpec.rationals()


def poly(values, spec):
    return DensePolynomial.from_values(values, spec)


def permutation_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def leibniz_char_poly(A: DenseMatrix) -> DensePolynomial:
    """det(xI - A) by the permutation expansion."""
    spec = A.domain
    n = A.nrows
    x = poly([0, 1], spec)
    entries = [[(x if i == j else DensePolynomial.zero(spec)) - poly([A[i, j]], spec)
                for j in range(n)] for i in range(n)]
    total = DensePolynomial.zero(spec)
    for perm in itertools.permutations(range(n)):
        term = poly_product([entries[i][perm[i]] for i in range(n)], spec)
        total = total + poly([permutation_sign(perm)], spec) * term
    return total


def monic_polys_below(degree, spec):
    """Every monic polynomial over a small GF(p) with degree < degree."""
    residues = range(spec.modulus)
    for d in range(degree):
        for low in itertools.product(residues, repeat=d):
            yield poly(list(low) + [1], spec)


def square_matrices(spec, max_n):
    if spec.is_prime_field:
        entries = st.integers(min_value=0, max_value=spec.modulus - 1)
    else:
        entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.lists(
            st.lists(entries, min_size=n, max_size=n),
            min_size=n, max_size=n
        )
    ).map(lambda rows: DenseMatrix.from_rows(rows, spec))


class TestCharPoly:
    """Unit tests for the Berkowitz characteristic polynomial."""

    def test_one_by_one(self):
        A = DenseMatrix.from_rows([[Fraction(3, 4)]], Q)
        assert char_poly(A) == poly([Fraction(-3, 4), 1], Q)

    def test_diagonal(self):
        """char_poly(diag(1, 2)) = x^2 - 3x + 2."""
        assert char_poly(mat_diagonal([1, 2], Q)) == poly([2, -3, 1], Q)

    def test_companion_round_trip(self):
        p = poly([3, 0, 4, 1], GF5)
        assert char_poly(companion(p)) == p

    def test_zero_matrix(self):
        assert char_poly(mat_zero(3, 3, GF7)) == DensePolynomial.monomial(3, GF7)

    def test_matches_leibniz_on_mixed_rational_matrix(self):
        A = DenseMatrix.from_rows(
            [[1, Fraction(-3, 4), 2], [0, Fraction(5, 2), -1], [4, 0, Fraction(1, 3)]], Q
        )
        assert char_poly(A) == leibniz_char_poly(A)

    def test_requires_square(self):
        with pytest.raises(DimensionMismatch):
            char_poly(DenseMatrix.from_rows([[1, 2]], Q))


class TestMinPoly:
    """Unit tests for the Krylov minimal polynomial."""

    def test_identity(self):
        assert min_poly(mat_identity(3, Q)) == poly([-1, 1], Q)

    def test_idempotent(self):
        """min_poly(diag(1, 1, 0)) = x^2 - x."""
        assert min_poly(mat_diagonal([1, 1, 0], Q)) == poly([0, -1, 1], Q)

    def test_zero_matrix(self):
        assert min_poly(mat_zero(2, 2, GF5)) == poly([0, 1], GF5)

    def test_companion_is_cyclic(self):
        p = poly([0, 0, 0, 1], GF5)
        assert min_poly(companion(p)) == p

    def test_gf2_involution(self):
        """Over GF(2), [[1, 1], [0, 1]] has minimal polynomial (x + 1)^2."""
        A = DenseMatrix.from_rows([[1, 1], [0, 1]], GF2)
        assert min_poly(A) == poly([1, 0, 1], GF2)

    def test_spectral_data(self):
        data = spectral_data(mat_diagonal([2, 2, 3], Q))
        assert data.matrix_order == 3
        assert data.char_poly == poly([-12, 16, -7, 1], Q)
        assert data.min_poly == poly([6, -5, 1], Q)


class TestPolyDivides:
    """Unit tests for divisibility."""

    def test_divides(self):
        assert poly_divides(poly([-1, 1], Q), poly([-1, 0, 1], Q))
        assert not poly_divides(poly([1, 1, 1], Q), poly([-1, 0, 1], Q))

    def test_everything_divides_zero(self):
        assert poly_divides(poly([3, 1], GF7), DensePolynomial.zero(GF7))

    def test_zero_divisor(self):
        with pytest.raises(DivisionByZero):
            poly_divides(DensePolynomial.zero(Q), poly([1], Q))


# Feature: rank-flow, Property 7: Berkowitz agrees with the Leibniz determinant
@settings(max_examples=100, deadline=None)
@given(A=st.one_of(
    square_matrices(GF2, 4), square_matrices(GF5, 4), square_matrices(GF7, 4), square_matrices(Q, 4)
))
def test_char_poly_matches_leibniz(A):
    """
    Property 7: Berkowitz agrees with the Leibniz determinant

    For any square A with n <= 4 over GF(2), GF(5), GF(7) or Q: char_poly(A) is monic
    of degree n and equals det(xI - A) from the permutation expansion.
    """
    chi = char_poly(A)
    assert chi.is_monic()
    assert chi.degree == A.nrows
    assert chi == leibniz_char_poly(A)


# Feature: rank-flow, Property 8: Minimal polynomial is minimal
@settings(max_examples=60, deadline=None)
@given(A=st.one_of(square_matrices(GF2, 4), square_matrices(GF3, 4), square_matrices(GF5, 4)))
def test_min_poly_minimal(A):
    """
    Property 8: Minimal polynomial is minimal

    For any square A with n <= 4 over GF(2), GF(3) or GF(5): m_A is monic, m_A(A) = 0,
    m_A divides char_poly(A), and no monic polynomial of lower degree
    annihilates A.
    """
    m = min_poly(A)
    assert m.is_monic()
    assert horner_eval(m, A).is_zero()
    assert poly_divides(m, char_poly(A))
    for candidate in monic_polys_below(int(m.degree), A.domain):
        assert not horner_eval(candidate, A).is_zero()
