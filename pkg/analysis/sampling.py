"""Sampling operators and their injectivity on (unions of) generated spaces.

The sampling operator of a measuring family A maps f to all inner products
<f, M psi_i> with the multiplication-generated system. Per fiber it is the
analysis operator of {psi_i(x)}, so T is one-to-one on the space generated
by a target family A' exactly when, on every fiber of the target's
spectrum, the mixed Gramian G_{A', A}(x) has rank dim J_{A'}(x).
"""

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import EmptyTargetsError
from .fiber_field import (
    ClosednessReport,
    FiberedGeneratorSet,
    check_same_grid,
    closedness_diagnosis,
    frame_bounds,
    range_function,
    spectrum,
)
from .gramian_engine import mixed_gramian, numerical_rank
from .subspace_geometry import DEFAULT_TOLERANCE, RankTolerance
from .transforms import FiniteGroupPair, translate

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SamplingInstance:
    """A measuring family and the target families sharing its grid."""

    measuring_set: FiberedGeneratorSet
    target_sets: Tuple[FiberedGeneratorSet, ...]

    def __post_init__(self):
        object.__setattr__(self, 'target_sets', tuple(self.target_sets))
        if self.target_sets:
            check_same_grid(self.measuring_set, *self.target_sets)


@dataclass(frozen=True)
class FiberRankFailure:
    index: int
    label: str
    rank: int
    dim: int


@dataclass(frozen=True)
class FiberRank:
    index: int
    dim: int
    rank: int
    measuring_upper_bound: Optional[float]

    @property
    def ok(self) -> bool:
        return self.rank == self.dim


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    failing_fibers: Tuple[FiberRankFailure, ...]
    fibers: Tuple[FiberRank, ...]
    # Largest fiber frame bound of the measuring family (its Bessel bound on the grid).
    bessel_bound: Optional[float]


class Verdict(enum.Enum):
    INJECTIVE = 'injective'
    NOT_INJECTIVE = 'not injective'
    INAPPLICABLE = 'inapplicable'


@dataclass(frozen=True)
class PairReport:
    delta: int
    theta: int
    closedness: ClosednessReport
    injectivity: Optional[InjectivityReport]

    @property
    def hypothesis_holds(self) -> bool:
        return self.closedness.closed


@dataclass(frozen=True)
class UnionReport:
    verdict: Verdict
    pair_reports: Tuple[PairReport, ...]
    hypothesis_violations: Tuple[Tuple[int, int], ...]

    @property
    def injective_on_union(self) -> Optional[bool]:
        """None when the pairwise closedness hypothesis fails."""
        if self.verdict is Verdict.INAPPLICABLE:
            return None
        return self.verdict is Verdict.INJECTIVE


def sampling_matrix_finite(pair: FiniteGroupPair, measuring_generators: Sequence) -> np.ndarray:
    """Dense (L r) x N sampling matrix; row t r + i is conj(L_{t M} psi_i)."""
    generators = [pair.check_vector(g) for g in measuring_generators]
    rows = [
        translate(g, gamma).conj()
        for gamma in pair.subgroup
        for g in generators
    ]
    if not rows:
        return np.zeros((0, pair.N), dtype=complex)
    return np.vstack(rows)


def injectivity_check(
    measuring: FiberedGeneratorSet,
    target: FiberedGeneratorSet,
    tol: RankTolerance = DEFAULT_TOLERANCE,
) -> InjectivityReport:
    """Fiberwise rank test: rank G_{target, measuring}(x) = dim J_target(x) on sigma(target)."""
    check_same_grid(measuring, target)
    rf = range_function(target, tol)
    support = spectrum(rf)
    bounds = frame_bounds(measuring, tol)
    # One cutoff for the whole family, like a dense rank decision.
    reference = measuring.scale() * target.scale()

    fibers, failures = [], []
    for j in range(len(target)):
        dim = rf[j].dim
        rank = 0
        if j in support:
            G = mixed_gramian(target.fiber(j), measuring.fiber(j))
            rank = numerical_rank(G.entries, tol, reference)
        fb = bounds.fibers[j].bounds
        fiber = FiberRank(index=j, dim=dim, rank=rank, measuring_upper_bound=None if fb is None else fb.upper)
        fibers.append(fiber)
        if j in support and not fiber.ok:
            failures.append(FiberRankFailure(index=j, label=target.grid.labels[j], rank=rank, dim=dim))
            logger.debug('Fiber %s: rank %d < dim %d', target.grid.labels[j], rank, dim)

    injective = not failures
    logger.info('Injectivity: %s (%d failing fibers)', injective, len(failures))
    return InjectivityReport(
        injective=injective,
        failing_fibers=tuple(failures),
        fibers=tuple(fibers),
        bessel_bound=bounds.upper,
    )


def union_generators(setA: FiberedGeneratorSet, setB: FiberedGeneratorSet) -> FiberedGeneratorSet:
    """Generators of A followed by those of B; fiberwise J = J_A + J_B."""
    check_same_grid(setA, setB)
    return FiberedGeneratorSet(setA.grid, np.concatenate([setA.values, setB.values], axis=2))


def union_injectivity_check(
    measuring: FiberedGeneratorSet,
    targets: Sequence[FiberedGeneratorSet],
    tol: RankTolerance = DEFAULT_TOLERANCE,
) -> UnionReport:
    """Injectivity on the union of all pairwise sums N_delta + N_theta.

    Every pair (delta <= theta, delta = theta included) must have a closed
    sum on Omega' before its injectivity is checked; any violation makes
    the verdict INAPPLICABLE.
    """
    targets = list(targets)
    if not targets:
        raise EmptyTargetsError('union_injectivity_check needs at least one target')
    check_same_grid(measuring, *targets)

    pair_reports, violations = [], []
    for delta, theta in itertools.combinations_with_replacement(range(len(targets)), 2):
        closedness = closedness_diagnosis(targets[delta], targets[theta], tol)
        injectivity = None
        if closedness.closed:
            union = union_generators(targets[delta], targets[theta])
            injectivity = injectivity_check(measuring, union, tol)
        else:
            violations.append((delta, theta))
            logger.warning(
                'Pair (%d, %d) violates the closedness hypothesis: angle %.17g over Omega\'',
                delta, theta, closedness.ess_sup_omega_prime,
            )
        pair_reports.append(PairReport(delta, theta, closedness, injectivity))

    if violations:
        verdict = Verdict.INAPPLICABLE
    elif all(p.injectivity.injective for p in pair_reports):
        verdict = Verdict.INJECTIVE
    else:
        verdict = Verdict.NOT_INJECTIVE
    return UnionReport(verdict, tuple(pair_reports), tuple(violations))
