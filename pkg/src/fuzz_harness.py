"""
Fuzz Harness module for RANK FLOW.

Seeded randomized trials over the rank identity, its certificate, the
corollary equivalences and the classifiers. Trial i draws everything from a
xorshift64* generator seeded with splitmix64(seed XOR i), so a trial can be
replayed alone and serial and threaded runs produce the same report.
"""

import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from src.classifiers import (
    charfactor_rank_sum, classify_a3a5, classify_idempotent, classify_involutive,
    classify_tripotent, rank_identity_app5
)
from src.config_loader import FuzzConfig, Generator, HarnessSettings
from src.error_handler import AlgebraError
from src.exact_matrix import (
    DenseMatrix, companion, horner_eval, mat_diagonal, mat_identity, mat_mul, mat_zero,
    matrices_commute
)
from src.field_core import FieldScalar, FieldSpec
from src.matrix_io import matrix_to_entries, poly_to_entries
from src.metrics_logger import FuzzMetricsLogger
from src.models import FuzzFailure, FuzzReport
from src.poly_ring import DensePolynomial, poly_product, poly_scale
from src.rank_theorem import (
    build_certificate, certificate_from_document, certificate_to_document,
    coprimality_witness, corollary1_check, corollary1prime_check, corollary2_check,
    corollary2_relation, corollary3_check, verify_certificate
)
from src.schemas import CertificateDocument
from src.spectral_poly import char_poly, min_poly, poly_divides

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
XORSHIFT_MULTIPLIER = 0x2545F4914F6CDD1D

# one trial in this many draws the zero polynomial
ZERO_POLY_ODDS = 16


def splitmix64(value: int) -> int:
    """splitmix64 output for a 64-bit input."""
    z = (value + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """
    xorshift64* generator (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).

    The state is splitmix64(seed); a zero state is replaced by the golden
    gamma constant since xorshift never leaves zero.
    """

    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or GOLDEN_GAMMA

    def next(self) -> int:
        """Next 64-bit output."""
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULTIPLIER) & MASK64

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] as lo + next() mod (hi - lo + 1)."""
        return lo + self.next() % (hi - lo + 1)

    def choice(self, items: Sequence):
        return items[self.randint(0, len(items) - 1)]


@dataclass
class GeneratedMatrix:
    """A random matrix and a known pairwise coprime factorization of its characteristic polynomial."""
    generator: str
    A: DenseMatrix
    factors: List[DensePolynomial]


@dataclass
class TrialOutcome:
    index: int
    failures: List[FuzzFailure] = field(default_factory=list)
    checks: Dict[str, int] = field(default_factory=dict)


def random_scalar(rng: Xorshift64Star, spec: FieldSpec, settings: HarnessSettings) -> FieldScalar:
    """Uniform residue over GF(p); bounded fraction over Q."""
    if spec.is_prime_field:
        return FieldScalar(spec, rng.randint(0, spec.modulus - 1))
    bound = settings.rational_numerator_bound
    numerator = rng.randint(-bound, bound)
    denominator = rng.randint(1, settings.rational_denominator_bound)
    return FieldScalar(spec, Fraction(numerator, denominator))


def random_nonzero_scalar(rng: Xorshift64Star, spec: FieldSpec, settings: HarnessSettings) -> FieldScalar:
    while True:
        value = random_scalar(rng, spec, settings)
        if not value.is_zero():
            return value


def random_poly(
    rng: Xorshift64Star,
    spec: FieldSpec,
    deg_range: Tuple[int, int],
    settings: HarnessSettings,
    allow_zero: bool = True
) -> DensePolynomial:
    """Random polynomial of degree in deg_range, occasionally zero."""
    if allow_zero and rng.randint(0, ZERO_POLY_ODDS - 1) == 0:
        return DensePolynomial.zero(spec)
    degree = rng.randint(*deg_range)
    coeffs = [random_scalar(rng, spec, settings) for _ in range(degree)]
    coeffs.append(random_nonzero_scalar(rng, spec, settings))
    return DensePolynomial.from_values(coeffs, spec)


def random_monic_poly(rng: Xorshift64Star, spec: FieldSpec, degree: int, settings: HarnessSettings) -> DensePolynomial:
    coeffs = [random_scalar(rng, spec, settings) for _ in range(degree)] + [spec.one()]
    return DensePolynomial.from_values(coeffs, spec)


def random_poly_pair(
    rng: Xorshift64Star,
    spec: FieldSpec,
    deg_range: Tuple[int, int],
    settings: HarnessSettings
) -> Tuple[DensePolynomial, DensePolynomial]:
    """
    Random (f, g). With probability shared_factor_rate / 3 both are multiplied
    by a common monic factor of degree 1 or 2, so non-coprime pairs show up.
    """
    lo, hi = deg_range
    if rng.randint(0, 2) < settings.shared_factor_rate and hi >= 1:
        common = random_monic_poly(rng, spec, rng.randint(1, min(2, hi)), settings)
        d = int(common.degree)
        rest = (max(lo - d, 0), max(hi - d, 0))
        f = common * random_poly(rng, spec, rest, settings, allow_zero=False)
        g = common * random_poly(rng, spec, rest, settings, allow_zero=False)
        return f, g
    return random_poly(rng, spec, deg_range, settings), random_poly(rng, spec, deg_range, settings)


def _conjugation_multiplier(rng: Xorshift64Star, spec: FieldSpec, settings: HarnessSettings) -> FieldScalar:
    # small integers over Q keep entry growth down
    if spec.is_prime_field:
        return random_nonzero_scalar(rng, spec, settings)
    return FieldScalar(spec, Fraction(rng.choice((-2, -1, 1, 2))))


def random_conjugator(
    rng: Xorshift64Star,
    n: int,
    spec: FieldSpec,
    settings: HarnessSettings
) -> Tuple[DenseMatrix, DenseMatrix]:
    """
    Random invertible S with its inverse, built from 2n elementary operations.

    Row operation E applied to S on the left is matched by E^-1 applied to
    S^-1 on the right, so S * S^-1 = I throughout.
    """
    S = mat_identity(n, spec).array.copy()
    S_inv = S.copy()
    for _ in range(2 * n):
        i = rng.randint(0, n - 1)
        c = _conjugation_multiplier(rng, spec, settings).value
        if n > 1 and rng.randint(0, 3) != 0:
            j = rng.randint(0, n - 2)
            if j >= i:
                j += 1
            S[i, :] = spec.reduce_array(S[i, :] + c * S[j, :])
            S_inv[:, j] = spec.reduce_array(S_inv[:, j] - c * S_inv[:, i])
        else:
            S[i, :] = spec.reduce_array(S[i, :] * c)
            S_inv[:, i] = spec.reduce_array(S_inv[:, i] * spec.inverse_value(c))
    return DenseMatrix(spec, S), DenseMatrix(spec, S_inv)


def _conjugate(rng: Xorshift64Star, canonical: DenseMatrix, settings: HarnessSettings) -> DenseMatrix:
    S, S_inv = random_conjugator(rng, canonical.nrows, canonical.domain, settings)
    return mat_mul(mat_mul(S, canonical), S_inv)


def _diagonal_form(values: List[FieldScalar], spec: FieldSpec) -> Tuple[DenseMatrix, List[DensePolynomial]]:
    """diag(values) and the factors (x - r)^m of its characteristic polynomial."""
    multiplicity: Dict = {}
    for v in values:
        multiplicity[v.value] = multiplicity.get(v.value, 0) + 1
    factors = []
    for root, m in multiplicity.items():
        linear = DensePolynomial.from_values([-spec.element(root), spec.one()], spec)
        factors.append(poly_product([linear] * m, spec))
    return mat_diagonal(values, spec), factors


def generate_matrix(
    rng: Xorshift64Star,
    generator: str,
    n: int,
    spec: FieldSpec,
    settings: HarnessSettings
) -> GeneratedMatrix:
    """
    Draw an n x n matrix from a named generator.

    Structured generators conjugate a canonical form (diagonal 0/1 or 0/+-1,
    nilpotent shift blocks, companion matrix) by a random invertible matrix.

    Raises:
        ValueError: On an unknown generator name
    """
    kind = Generator(generator)
    one = spec.one()

    if kind == Generator.GENERIC:
        rows = [[random_scalar(rng, spec, settings) for _ in range(n)] for _ in range(n)]
        A = DenseMatrix.from_rows(rows, spec)
        return GeneratedMatrix(generator, A, [char_poly(A)])

    if kind == Generator.NILPOTENT:
        canonical = mat_zero(n, n, spec).array.copy()
        start = 0
        while start < n:
            size = rng.randint(1, n - start)
            for i in range(start, start + size - 1):
                canonical[i, i + 1] = spec.coerce(1)
            start += size
        A = _conjugate(rng, DenseMatrix(spec, canonical), settings)
        return GeneratedMatrix(generator, A, [DensePolynomial.monomial(n, spec)])

    if kind == Generator.COMPANION:
        p = random_monic_poly(rng, spec, n, settings)
        A = _conjugate(rng, companion(p), settings)
        return GeneratedMatrix(generator, A, [p])

    palette = {
        Generator.IDEMPOTENT: [spec.zero(), one],
        Generator.INVOLUTIVE: [one, -one],
        Generator.TRIPOTENT: [spec.zero(), one, -one],
    }[kind]
    canonical, factors = _diagonal_form([rng.choice(palette) for _ in range(n)], spec)
    return GeneratedMatrix(generator, _conjugate(rng, canonical, settings), factors)


class _TrialContracts:
    """Runs named contracts for one trial, counting checks and recording failures."""

    def __init__(self, outcome: TrialOutcome, inputs: Dict):
        self.outcome = outcome
        self.inputs = inputs

    def check(self, contract: str, predicate: Callable[[], bool]) -> bool:
        self.outcome.checks[contract] = self.outcome.checks.get(contract, 0) + 1
        try:
            ok = bool(predicate())
            error = None
        except (AlgebraError, ArithmeticError, ValueError) as e:
            ok = False
            error = f"{type(e).__name__}: {e}"
        if not ok:
            inputs = dict(self.inputs)
            if error:
                inputs['error'] = error
            self.outcome.failures.append(FuzzFailure(self.outcome.index, contract, inputs))
            logger.warning(f"trial {self.outcome.index}: contract {contract} failed")
        return ok


def _certificate_round_trip(cert) -> bool:
    document = certificate_to_document(cert, verified=True)
    restored = certificate_from_document(CertificateDocument.model_validate_json(document.model_dump_json()))
    return bool(verify_certificate(restored))


def run_trial(config: FuzzConfig, index: int) -> TrialOutcome:
    """
    Draw (A, f, g) for trial index and check every applicable contract.

    Returns:
        TrialOutcome with per-contract check counts and any failures
    """
    spec = config.field
    settings = config.harness
    rng = Xorshift64Star(config.seed ^ index)

    n = rng.randint(*config.n_range)
    generator = rng.choice(config.generators)
    generated = generate_matrix(rng, generator, n, spec, settings)
    f, g = random_poly_pair(rng, spec, config.deg_range, settings)
    A = generated.A

    outcome = TrialOutcome(index)
    inputs = {
        'generator': generator,
        'field': spec.label,
        'n': n,
        'A': matrix_to_entries(A),
        'f': poly_to_entries(f),
        'g': poly_to_entries(g),
        'factors': [poly_to_entries(p) for p in generated.factors],
    }
    contracts = _TrialContracts(outcome, inputs)

    try:
        cert = build_certificate(A, f, g)
    except AlgebraError as e:
        contracts.check('theorem_identity', lambda: False)
        logger.error(f"trial {index}: certificate construction failed: {e}")
        return outcome

    bz = cert.bezout
    contracts.check('theorem_identity', cert.identity_holds)
    contracts.check('factorization', lambda: cert.L2 @ cert.L1 @ cert.B @ cert.C1 @ cert.C2 == cert.C)
    contracts.check('rank_B', lambda: cert.rank_B == cert.rank_f + cert.rank_g)
    contracts.check('rank_C', lambda: cert.rank_C == cert.rank_D + cert.rank_M)
    contracts.check('bezout_identity', lambda: f * bz.phi1 + bz.phi2 * g == bz.D)
    contracts.check('eq2_instance', lambda: (
        mat_mul(cert.fA, horner_eval(bz.phi1, A)) + mat_mul(horner_eval(bz.phi2, A), cert.gA) == cert.DA
    ))
    contracts.check('cofactor_instances', lambda: (
        cert.gA == mat_mul(horner_eval(bz.psi1, A), cert.DA)
        and cert.fA == mat_mul(cert.DA, horner_eval(bz.psi2, A))
    ))
    contracts.check('lcm_associate', lambda: poly_scale(bz.M * bz.D, bz.lcm_scale) == f * g)
    contracts.check('evaluations_commute', lambda: matrices_commute(cert.fA, cert.gA))
    contracts.check('certificate_verifies', lambda: _certificate_round_trip(cert))

    cor1 = corollary1_check(A, f, g)
    cor1p = corollary1prime_check(A, f, g)
    contracts.check('corollary1', lambda: cor1.holds)
    contracts.check('corollary1prime', lambda: cor1p.holds)
    contracts.check('corollary1_bridge', lambda: cor1.rhs == cor1p.rhs)

    if not (f.is_zero() and g.is_zero()):
        if bz.is_coprime():
            contracts.check('corollary2_forward', lambda: corollary2_check(A, f, g).lhs)
            contracts.check('corollary3', lambda: corollary3_check(A, f, g).holds)
        else:
            contracts.check('coprimality_witness', lambda: not corollary2_relation(coprimality_witness(f, g), f, g))

    m = min_poly(A)
    contracts.check('minpoly_annihilates', lambda: horner_eval(m, A).is_zero())
    contracts.check('minpoly_divides_charpoly', lambda: poly_divides(m, char_poly(A)))

    contracts.check('classify_idempotent', lambda: classify_idempotent(A).consistent)
    if spec.characteristic != 2:
        contracts.check('classify_involutive', lambda: classify_involutive(A).consistent)
        contracts.check('classify_tripotent', lambda: classify_tripotent(A).consistent)
        contracts.check('classify_a3a5', lambda: classify_a3a5(A).consistent)
    contracts.check('rank_identity_app5', lambda: rank_identity_app5(A).consistent)
    contracts.check('charfactor_rank_sum', lambda: charfactor_rank_sum(A, generated.factors).consistent)

    return outcome


def run_fuzz(config: FuzzConfig, metrics: Optional[FuzzMetricsLogger] = None) -> FuzzReport:
    """
    Run config.trials trials on config.workers threads.

    Outcomes are consumed in trial order, so the report does not depend on the
    thread count.

    Args:
        config: Validated FuzzConfig
        metrics: Collector for tallies and failures (a fresh one if None)

    Returns:
        FuzzReport with failures sorted by trial index
    """
    metrics = metrics or FuzzMetricsLogger()
    logger.info(f"fuzz: {config.trials} trials over {config.field}, n={config.n_range[0]}..{config.n_range[1]}, "
                f"deg={config.deg_range[0]}..{config.deg_range[1]}, seed={config.seed}, workers={config.workers}")
    start = time.perf_counter()

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        outcomes = executor.map(lambda i: run_trial(config, i), range(config.trials))
        for outcome in tqdm(outcomes, total=config.trials, desc="fuzz", unit="trial",
                            disable=not config.progress, file=sys.stderr):
            metrics.record_trial(outcome.checks, outcome.failures)

    report = metrics.finalize(config, time.perf_counter() - start)
    logger.info(f"fuzz finished: {report.trials_run} trials, {len(report.failures)} failures "
                f"in {report.elapsed:.2f}s")
    return report
