"""Dense brute-force ground truth on finite groups.

Translation-generated spaces are materialized as explicit subspaces of C^N
and measured directly, with no Zak transform involved. The crosscheck
suite compares every fiberwise result against these dense computations.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, NumericalInconsistencyError
from .fiber_field import ess_sup_angle, intersection_spectrum
from .sampling import injectivity_check, sampling_matrix_finite
from .subspace_geometry import (
    DEFAULT_TOLERANCE,
    RankTolerance,
    Subspace,
    orthonormal_basis,
    sup_cosine_angle,
)
from .transforms import FiniteGroupPair, fiberize_group, translate

logger = logging.getLogger(__name__)

POWER_SQUARINGS = 20
POWER_ITERATIONS = 500
POWER_RESIDUAL = 1e-13
METHOD_AGREEMENT = 1e-9
ANGLE_TOLERANCE = 1e-8
# A max over Omega' this close to 1 must be explained by near-intersections.
OMEGA_PRIME_CEILING = 1e-10


@dataclass(frozen=True, eq=False)
class DenseSpace:
    """Span of all Gamma-translates of the generators, as a subspace of C^N."""

    pair: FiniteGroupPair
    basis: Subspace

    @property
    def ambient_dim(self) -> int:
        return self.basis.ambient_dim

    @property
    def dim(self) -> int:
        return self.basis.dim


def translate_matrix(pair: FiniteGroupPair, generators: Sequence) -> np.ndarray:
    """N x (L r) matrix whose columns are L_gamma psi_i."""
    generators = [pair.check_vector(g) for g in generators]
    columns = [translate(g, gamma) for gamma in pair.subgroup for g in generators]
    if not columns:
        return np.zeros((pair.N, 0), dtype=complex)
    return np.column_stack(columns)


def dense_space(pair: FiniteGroupPair, generators: Sequence, tol: RankTolerance = DEFAULT_TOLERANCE) -> DenseSpace:
    return DenseSpace(pair, orthonormal_basis(translate_matrix(pair, generators), tol, ambient_dim=pair.N))


def power_iteration_angle(A: DenseSpace, B: DenseSpace, seed: int = 0) -> float:
    """sqrt of the top eigenvalue of P_B P_A P_B by power iteration.

    Runs in B's coordinates: K = C C^H with C = Q_B^H Q_A. The iteration
    uses K^(2^s), normalized after each squaring, so nearly tied top
    eigenvalues still separate; the estimate is the Rayleigh quotient of K.
    """
    if A.dim == 0 or B.dim == 0:
        return 0.0
    C = B.basis.basis.conj().T @ A.basis.basis
    K = C @ C.conj().T
    if not np.any(K):
        return 0.0
    powered = K / np.linalg.norm(K)
    for _ in range(POWER_SQUARINGS):
        powered = powered @ powered
        powered = (powered + powered.conj().T) / 2
        powered /= np.linalg.norm(powered)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(B.dim) + 1j * rng.standard_normal(B.dim)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(POWER_ITERATIONS):
        w = powered @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            break
        v = w / norm
        Kv = K @ v
        estimate = float(np.real(np.vdot(v, Kv)))
        if np.linalg.norm(Kv - estimate * v) <= POWER_RESIDUAL:
            break
    return float(np.sqrt(min(max(estimate, 0.0), 1.0)))


def dense_sup_angle(A: DenseSpace, B: DenseSpace) -> float:
    """Supremum cosine angle of two dense spaces.

    Power iteration cross-checks the SVD value; a gap is logged, and the
    crosscheck suite counts it as a failure.
    """
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatchError(f'Dense spaces in C^{A.ambient_dim} and C^{B.ambient_dim}')
    value = sup_cosine_angle(A.basis, B.basis)
    check = power_iteration_angle(A, B)
    if abs(value - check) > METHOD_AGREEMENT:
        logger.warning('Dense angle methods disagree: svd %.17g, power %.17g', value, check)
    return value


def dense_injectivity(T: np.ndarray, S: DenseSpace, tol: RankTolerance = DEFAULT_TOLERANCE) -> bool:
    """rank(T Q_S) == dim S under the relative cutoff."""
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[1] != S.ambient_dim:
        raise DimensionMismatchError(f'Sampling matrix of shape {T.shape} against C^{S.ambient_dim}')
    if S.dim == 0:
        return True
    restricted = T @ S.basis.basis
    if restricted.size == 0 or not np.any(restricted):
        return False
    s = scipy.linalg.svdvals(restricted)
    rank = int(np.count_nonzero(s >= tol.relative_threshold * s[0]))
    return rank == S.dim


def dense_nullvector(T: np.ndarray, S: DenseSpace, tol: RankTolerance = DEFAULT_TOLERANCE) -> Optional[np.ndarray]:
    """A unit vector of S with all samples zero, or None if T is injective on S."""
    if dense_injectivity(T, S, tol):
        return None
    restricted = np.asarray(T, dtype=complex) @ S.basis.basis
    if restricted.size == 0 or not np.any(restricted):
        return S.basis.basis[:, 0]
    kernel = scipy.linalg.null_space(restricted, rcond=tol.relative_threshold)
    vector = S.basis.basis @ kernel[:, 0]
    return vector / np.linalg.norm(vector)


@dataclass
class CrosscheckFailure:
    instance: int
    kind: str
    detail: str


@dataclass
class CrosscheckSummary:
    seed: int
    angle_instances: int
    injectivity_instances: int
    max_angle_deviation: float = 0.0
    max_route_gap: float = 0.0
    max_method_gap: float = 0.0
    injectivity_disagreements: int = 0
    failures: List[CrosscheckFailure] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_generators(rng, N: int, count: int) -> List[np.ndarray]:
    return [
        (rng.standard_normal(N) + 1j * rng.standard_normal(N)) / np.sqrt(2)
        for _ in range(count)
    ]


def random_pair(rng, min_order: int, max_order: int) -> FiniteGroupPair:
    N = int(rng.integers(min_order, max_order + 1))
    divisors = [d for d in range(1, N + 1) if N % d == 0]
    return FiniteGroupPair(N, int(divisors[rng.integers(len(divisors))]))


def random_angle_instance(rng, min_order: int = 4, max_order: int = 64, max_generators: int = 3):
    """Random pair and two generator lists; B sometimes reuses a generator of A."""
    pair = random_pair(rng, min_order, max_order)
    gens_a = _random_generators(rng, pair.N, int(rng.integers(1, max_generators + 1)))
    gens_b = _random_generators(rng, pair.N, int(rng.integers(1, max_generators + 1)))
    if rng.random() < 0.25:
        gens_b[0] = gens_a[0]
    return pair, gens_a, gens_b


def delta_pair_instance() -> Tuple[FiniteGroupPair, List[np.ndarray], List[np.ndarray]]:
    """N=4, M=2: measuring delta_0 - delta_M, target delta_0 (not injective at alpha = 0)."""
    pair = FiniteGroupPair(4, 2)
    delta0 = np.eye(4)[0].astype(complex)
    return pair, [delta0 - np.eye(4)[2]], [delta0]


def compare_angle(pair, gens_a, gens_b, tol: RankTolerance = DEFAULT_TOLERANCE) -> dict:
    """Fiberwise ess-sup over Omega against the dense angle for one instance."""
    setA, setB = fiberize_group(gens_a, pair), fiberize_group(gens_b, pair)
    profile = ess_sup_angle(setA, setB, tol=tol)
    A, B = dense_space(pair, gens_a, tol), dense_space(pair, gens_b, tol)
    dense = sup_cosine_angle(A.basis, B.basis)
    power = power_iteration_angle(A, B)
    return {
        'fiberwise': profile.ess_sup,
        'dense': dense,
        'deviation': abs(profile.ess_sup - dense),
        'route_gap': profile.max_route_gap,
        'power': power,
        'method_gap': abs(dense - power),
        'profile': profile,
        'sets': (setA, setB),
    }


def compare_injectivity(pair, measuring_gens, target_gens, tol: RankTolerance = DEFAULT_TOLERANCE) -> dict:
    measuring, target = fiberize_group(measuring_gens, pair), fiberize_group(target_gens, pair)
    fiberwise = injectivity_check(measuring, target, tol).injective
    dense = dense_injectivity(sampling_matrix_finite(pair, measuring_gens), dense_space(pair, target_gens, tol), tol)
    return {'fiberwise': fiberwise, 'dense': dense}


def _check_omega_prime(instance, result, tol, summary):
    """In finite groups every fiber sum is closed: the max over Omega' stays below 1."""
    profile = result['profile']
    if profile.ess_sup_omega_prime < 1.0 - OMEGA_PRIME_CEILING:
        return
    setA, setB = result['sets']
    # Recompute with a loose intersection cutoff: near-intersections account for the 1.
    loose = tol.replace(intersect_threshold=max(tol.intersect_threshold, OMEGA_PRIME_CEILING) * 10)
    explained = intersection_spectrum(setA, setB, loose)
    top = [f.index for f in profile.fibers if f.in_omega_prime and f.angle >= 1.0 - OMEGA_PRIME_CEILING]
    if not set(top) <= explained:
        summary.failures.append(CrosscheckFailure(
            instance, 'omega-prime', f'angle 1 on Omega\' at fibers {top} without an intersection',
        ))


def crosscheck_suite(
    seed: int = 0,
    angle_instances: int = 200,
    injectivity_instances: int = 100,
    min_order: int = 4,
    max_order: int = 64,
    max_generators: int = 3,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    max_deviation: float = ANGLE_TOLERANCE,
) -> CrosscheckSummary:
    """Seeded pipeline-versus-oracle comparison for angles and injectivity.

    Failures are collected, never raised. Instance 0 of each kind is a
    degenerate fixture: a zero generator for angles, the delta
    counterexample for injectivity. Injectivity instance 1 measures with a
    zero generator, which both sides must call non-injective.
    """
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    summary = CrosscheckSummary(seed, angle_instances, injectivity_instances)

    for k in range(angle_instances):
        if k == 0:
            pair = FiniteGroupPair(8, 2)
            gens_a, gens_b = [np.zeros(8, dtype=complex)], _random_generators(rng, 8, 1)
        else:
            pair, gens_a, gens_b = random_angle_instance(rng, min_order, max_order, max_generators)
        try:
            result = compare_angle(pair, gens_a, gens_b, tol)
        except NumericalInconsistencyError as e:
            summary.failures.append(CrosscheckFailure(k, 'route', str(e)))
            continue
        summary.max_angle_deviation = max(summary.max_angle_deviation, result['deviation'])
        summary.max_route_gap = max(summary.max_route_gap, result['route_gap'])
        summary.max_method_gap = max(summary.max_method_gap, result['method_gap'])
        if result['method_gap'] > METHOD_AGREEMENT:
            summary.failures.append(CrosscheckFailure(
                k, 'method',
                f'N={pair.N} M={pair.M}: svd {result["dense"]!r} vs power iteration {result["power"]!r}',
            ))
        if result['deviation'] > max_deviation:
            summary.failures.append(CrosscheckFailure(
                k, 'angle',
                f'N={pair.N} M={pair.M}: fiberwise {result["fiberwise"]!r} vs dense {result["dense"]!r}',
            ))
        _check_omega_prime(k, result, tol, summary)

    for k in range(injectivity_instances):
        if k == 0:
            pair, measuring_gens, target_gens = delta_pair_instance()
        elif k == 1:
            pair = FiniteGroupPair(8, 2)
            measuring_gens, target_gens = [np.zeros(8, dtype=complex)], _random_generators(rng, 8, 1)
        else:
            pair = random_pair(rng, min_order, max_order)
            measuring_gens = _random_generators(rng, pair.N, int(rng.integers(1, max_generators + 1)))
            target_gens = _random_generators(rng, pair.N, int(rng.integers(1, max_generators + 1)))
        result = compare_injectivity(pair, measuring_gens, target_gens, tol)
        if result['fiberwise'] != result['dense']:
            summary.injectivity_disagreements += 1
            summary.failures.append(CrosscheckFailure(
                k, 'injectivity',
                f'N={pair.N} M={pair.M}: fiberwise {result["fiberwise"]} vs dense {result["dense"]}',
            ))

    summary.elapsed = time.perf_counter() - started
    logger.info(
        'Crosscheck seed=%d: max angle deviation %.3e, %d injectivity disagreements, %d failures in %.2fs',
        seed, summary.max_angle_deviation, summary.injectivity_disagreements,
        len(summary.failures), summary.elapsed,
    )
    return summary
