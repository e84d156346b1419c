"""
Property-based tests for RANK FLOW across modules.
"""
from hypothesis import given, strategies as st, settings

from src.classifiers import classify
from src.config_loader import FuzzConfig, GENERATOR_NAMES, HarnessSettings
from src.exact_matrix import (
    block2x2, horner_eval, mat_identity, mat_mul, mat_rank, mat_scale, mat_zero, matrices_commute
)
from src.field_core import FieldSpec
from src.fuzz_harness import (
    Xorshift64Star, generate_matrix, random_conjugator, random_nonzero_scalar, random_poly_pair, run_trial
)
from src.rank_theorem import (
    build_certificate, certificate_from_document, certificate_to_document, verify_certificate
)
from src.schemas import CertificateDocument
from src.spectral_poly import char_poly, min_poly

SETTINGS = HarnessSettings()
FIELDS = [FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(7), FieldSpec.rationals()]

seeds = st.integers(min_value=0, max_value=2 ** 64 - 1)
fields = st.sampled_from(FIELDS)
odd_fields = st.sampled_from([spec for spec in FIELDS if spec.characteristic != 2])


# Feature: rank-flow, Property 11: Structured matrices satisfy their defining property
@settings(max_examples=40, deadline=None)
@given(seed=seeds, spec=odd_fields, n=st.integers(min_value=1, max_value=5),
       kind=st.sampled_from(["idempotent", "involutive", "tripotent"]))
def test_structured_matrices_classify(seed, spec, n, kind):
    """
    Property 11: Structured matrices satisfy their defining property

    For any matrix conjugated from a 0/1, +-1 or 0/+-1 diagonal form, the
    direct check of the matching property is true and every rank statement
    agrees with it.
    """
    A = generate_matrix(Xorshift64Star(seed), kind, n, spec, SETTINGS).A
    report = classify(A, kind)
    assert report.direct_check, f"{kind} generator produced a matrix failing A^k check"
    assert report.consistent, f"Rank statements disagree for {kind}: {report.ranks_used}"


# Feature: rank-flow, Property 12: Coprime factor rank sum
@settings(max_examples=40, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=5),
       generator=st.sampled_from(GENERATOR_NAMES))
def test_charfactor_rank_sum(seed, spec, n, generator):
    """
    Property 12: Coprime factor rank sum

    For any matrix with a known pairwise coprime factorization f1...fk of its
    characteristic polynomial, sum of rank fi(A) equals (k-1)n and every
    partial product statement holds.
    """
    generated = generate_matrix(Xorshift64Star(seed), generator, n, spec, SETTINGS)
    report = classify(generated.A, "charfactors", generated.factors)
    k = len(generated.factors)
    rank_sum = sum(report.ranks_used[f"f{i + 1}(A)"] for i in range(k))
    assert rank_sum == (k - 1) * n, f"Rank sum {rank_sum} != {(k - 1) * n}"
    assert report.consistent


# Feature: rank-flow, Property 13: Certificate documents survive serialization
@settings(max_examples=40, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=4))
def test_certificate_document_round_trip(seed, spec, n):
    """
    Property 13: Certificate documents survive serialization

    For any (A, f, g), writing the certificate to JSON and reading it back
    gives a certificate that verifies with the same four ranks.
    """
    rng = Xorshift64Star(seed)
    A = generate_matrix(rng, "generic", n, spec, SETTINGS).A
    f, g = random_poly_pair(rng, spec, (0, 3), SETTINGS)
    cert = build_certificate(A, f, g)

    document = certificate_to_document(cert, verified=True)
    restored = certificate_from_document(CertificateDocument.model_validate_json(document.model_dump_json()))

    assert verify_certificate(restored).ok
    assert (restored.rank_f, restored.rank_g, restored.rank_D, restored.rank_M) == \
        (cert.rank_f, cert.rank_g, cert.rank_D, cert.rank_M)


# Feature: rank-flow, Property 14: Ranks are similarity invariants
@settings(max_examples=40, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=4))
def test_ranks_similarity_invariant(seed, spec, n):
    """
    Property 14: Ranks are similarity invariants

    For any invertible S, the four ranks of the identity for S A S^-1 equal
    those for A, since p(S A S^-1) = S p(A) S^-1.
    """
    rng = Xorshift64Star(seed)
    A = generate_matrix(rng, "generic", n, spec, SETTINGS).A
    f, g = random_poly_pair(rng, spec, (0, 3), SETTINGS)
    S, S_inv = random_conjugator(rng, n, spec, SETTINGS)
    B = mat_mul(mat_mul(S, A), S_inv)

    for p in (f, g):
        assert mat_rank(horner_eval(p, A)) == mat_rank(horner_eval(p, B))

    original, conjugated = build_certificate(A, f, g), build_certificate(B, f, g)
    assert (original.rank_D, original.rank_M) == (conjugated.rank_D, conjugated.rank_M)
    assert conjugated.identity_holds()


# Feature: rank-flow, Property 15: Fuzz trials are reproducible
@settings(max_examples=15, deadline=None)
@given(seed=seeds, spec=fields, index=st.integers(min_value=0, max_value=1000))
def test_fuzz_trial_reproducible(seed, spec, index):
    """
    Property 15: Fuzz trials are reproducible

    For any seed and trial index, running the trial twice checks the same
    contracts and neither run records a failure.
    """
    config = FuzzConfig(field=spec, n_range=(1, 3), deg_range=(0, 3), trials=1, seed=seed)
    first, second = run_trial(config, index), run_trial(config, index)
    assert first.checks == second.checks
    assert first.failures == second.failures == [], \
        f"Contracts failed: {[f.contract for f in first.failures]}"


generators = st.sampled_from(GENERATOR_NAMES)


# Feature: rank-flow, Property 19: Invertible factors preserve rank
@settings(max_examples=50, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=5), generator=generators)
def test_rank_invariant_under_invertible_factors(seed, spec, n, generator):
    """
    Property 19: Invertible factors preserve rank

    For any P and invertible U, V: rank(U P) = rank P = rank(P V).
    """
    rng = Xorshift64Star(seed)
    P = generate_matrix(rng, generator, n, spec, SETTINGS).A
    U, U_inv = random_conjugator(rng, n, spec, SETTINGS)
    V, _ = random_conjugator(rng, n, spec, SETTINGS)
    assert mat_mul(U, U_inv) == mat_identity(n, spec)
    r = mat_rank(P)
    assert mat_rank(mat_mul(U, P)) == r
    assert mat_rank(mat_mul(P, V)) == r
    assert mat_rank(mat_mul(mat_mul(U, P), V)) == r


# Feature: rank-flow, Property 20: Nonzero scalars preserve rank
@settings(max_examples=50, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=5), generator=generators)
def test_rank_invariant_under_scaling(seed, spec, n, generator):
    """
    Property 20: Nonzero scalars preserve rank

    For any P and nonzero scalar c: rank(c P) = rank P.
    """
    rng = Xorshift64Star(seed)
    P = generate_matrix(rng, generator, n, spec, SETTINGS).A
    c = random_nonzero_scalar(rng, spec, SETTINGS)
    assert mat_rank(mat_scale(P, c)) == mat_rank(P)


# Feature: rank-flow, Property 21: Rank is additive over block diagonals
@settings(max_examples=50, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=4),
       first=generators, second=generators)
def test_block_diagonal_rank_additive(seed, spec, n, first, second):
    """
    Property 21: Rank is additive over block diagonals

    For any n x n P and Q: rank [[P, 0], [0, Q]] = rank P + rank Q.
    """
    rng = Xorshift64Star(seed)
    P = generate_matrix(rng, first, n, spec, SETTINGS).A
    Q = generate_matrix(rng, second, n, spec, SETTINGS).A
    zero = mat_zero(n, n, spec)
    assert mat_rank(block2x2(P, zero, zero, Q)) == mat_rank(P) + mat_rank(Q)


# Feature: rank-flow, Property 22: Polynomials in one matrix commute
@settings(max_examples=50, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=4), generator=generators)
def test_polynomial_evaluations_commute(seed, spec, n, generator):
    """
    Property 22: Polynomials in one matrix commute

    For any A and polynomials p, q: p(A) q(A) = q(A) p(A).
    """
    rng = Xorshift64Star(seed)
    A = generate_matrix(rng, generator, n, spec, SETTINGS).A
    p, q = random_poly_pair(rng, spec, (0, 4), SETTINGS)
    assert matrices_commute(horner_eval(p, A), horner_eval(q, A))


# Feature: rank-flow, Property 23: Similar matrices share spectral polynomials
@settings(max_examples=50, deadline=None)
@given(seed=seeds, spec=fields, n=st.integers(min_value=1, max_value=4), generator=generators)
def test_min_poly_similarity_invariant(seed, spec, n, generator):
    """
    Property 23: Similar matrices share spectral polynomials

    For any A and invertible S: min_poly(S A S^-1) = min_poly(A) and
    char_poly(S A S^-1) = char_poly(A).
    """
    rng = Xorshift64Star(seed)
    A = generate_matrix(rng, generator, n, spec, SETTINGS).A
    S, S_inv = random_conjugator(rng, n, spec, SETTINGS)
    B = mat_mul(mat_mul(S, A), S_inv)
    assert min_poly(B) == min_poly(A)
    assert char_poly(B) == char_poly(A)
