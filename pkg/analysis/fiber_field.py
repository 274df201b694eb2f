"""Fibered representation of finitely generated multiplication invariant spaces.

A space generated by r functions is sampled on a weighted grid of fiber
points; multiplications act diagonally per fiber, so every global
question (angle, closedness, frame bounds) reduces to linear algebra on
each fiber. Essential suprema are realized as maxima over the grid.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    GridMismatchError,
    InvalidRegionError,
    NumericalInconsistencyError,
)
from .gramian_engine import (
    FrameBounds,
    GeneratorFiber,
    fiber_angle_via_gramian,
    fiber_frame_bounds,
    gramian,
    mixed_gramian,
)
from .subspace_geometry import (
    DEFAULT_TOLERANCE,
    RankTolerance,
    Subspace,
    intersection_dimension,
    orthonormal_basis,
    sup_cosine_angle,
)

logger = logging.getLogger(__name__)

# Basis and Gramian routes must agree this closely on every fiber;
# beyond it the fiber is treated as ill-conditioned.
ROUTE_ERROR_THRESHOLD = 1e-6
ROUTE_WARNING_THRESHOLD = 1e-9


@dataclass(frozen=True, eq=False)
class FiberGrid:
    """Fiber points x_j with quadrature weights w_j."""

    points: np.ndarray
    weights: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if points.size < 1:
            raise DimensionMismatchError('A fiber grid needs at least one point')
        if weights.shape != points.shape:
            raise DimensionMismatchError(f'{weights.size} weights for {points.size} points')
        if not np.all(weights > 0):
            raise DimensionMismatchError('Fiber weights must be positive')
        labels = tuple(self.labels) if self.labels else tuple(str(j) for j in range(points.size))
        if len(labels) != points.size or len(set(labels)) != len(labels):
            raise DimensionMismatchError('Fiber labels must be unique, one per point')
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'labels', labels)

    def __len__(self):
        return self.points.size

    @classmethod
    def midpoint(cls, n: int) -> 'FiberGrid':
        """Midpoints (j + 0.5)/n of [0, 1) with weights 1/n."""
        return cls((np.arange(n) + 0.5) / n, np.full(n, 1.0 / n))

    @classmethod
    def left(cls, n: int) -> 'FiberGrid':
        """Left endpoints j/n of [0, 1) with weights 1/n."""
        return cls(np.arange(n) / n, np.full(n, 1.0 / n))

    def same_as(self, other: 'FiberGrid') -> bool:
        return self is other or (
            len(self) == len(other)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )

    def check_region(self, region: Iterable[int]) -> frozenset:
        region = frozenset(int(j) for j in region)
        unknown = sorted(j for j in region if j < 0 or j >= len(self))
        if unknown:
            raise InvalidRegionError(f'Fiber indices outside the grid: {unknown}')
        return region


@dataclass(frozen=True, eq=False)
class FiberedGeneratorSet:
    """r generators sampled on a grid: ``values[j, :, i]`` is psi_i(x_j)."""

    grid: FiberGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 3:
            raise DimensionMismatchError(f'Expected an (n, m, r) array, got shape {values.shape}')
        if values.shape[0] != len(self.grid):
            raise DimensionMismatchError(f'{values.shape[0]} fibers on a grid of {len(self.grid)} points')
        if values.shape[1] < 1 or values.shape[2] < 1:
            raise DimensionMismatchError('Fibers need m >= 1 and r >= 1')
        if not np.all(np.isfinite(values)):
            raise DimensionMismatchError('Fiber values must be finite')
        object.__setattr__(self, 'values', values)

    @property
    def r(self) -> int:
        return self.values.shape[2]

    @property
    def ambient_dim(self) -> int:
        return self.values.shape[1]

    def __len__(self):
        return self.values.shape[0]

    def fiber(self, j: int) -> GeneratorFiber:
        return GeneratorFiber(self.values[j])

    def fibers(self) -> List[GeneratorFiber]:
        return [self.fiber(j) for j in range(len(self))]

    def norms(self) -> np.ndarray:
        """Weighted squared norms sum_j w_j ||psi_i(x_j)||^2, one per generator."""
        per_fiber = np.sum(np.abs(self.values) ** 2, axis=1)
        return self.grid.weights @ per_fiber

    def scale(self) -> float:
        """Largest fiber singular value over the grid (shared rank reference)."""
        return max((float(np.linalg.norm(self.values[j], 2)) for j in range(len(self))), default=0.0)


def check_same_grid(*sets: FiberedGeneratorSet):
    first = sets[0]
    for other in sets[1:]:
        if not first.grid.same_as(other.grid):
            raise GridMismatchError('Fibered sets live on different grids')
        if other.ambient_dim != first.ambient_dim:
            raise GridMismatchError(
                f'Fiber dimensions differ: {first.ambient_dim} vs {other.ambient_dim}'
            )


@dataclass(frozen=True)
class FiberAngle:
    index: int
    angle: float
    dim_a: int
    dim_b: int
    in_omega: bool
    in_omega_prime: bool
    route_gap: float = 0.0


@dataclass(frozen=True)
class AngleProfile:
    """Per-fiber angles with Omega / Omega' flags and the max over a region."""

    grid: FiberGrid = field(repr=False)
    fibers: Tuple[FiberAngle, ...]
    region: frozenset
    ess_sup: float
    argmax: Optional[int]
    ess_sup_omega: float
    ess_sup_omega_prime: float

    @property
    def argmax_label(self) -> Optional[str]:
        return None if self.argmax is None else self.grid.labels[self.argmax]

    @property
    def max_route_gap(self) -> float:
        return max((f.route_gap for f in self.fibers), default=0.0)

    def angles(self) -> np.ndarray:
        return np.array([f.angle for f in self.fibers])


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    ess_sup_omega_prime: float
    witnesses: Tuple[int, ...]
    intersection_fibers: Tuple[int, ...]
    profile: AngleProfile


@dataclass(frozen=True)
class FiberFrameBounds:
    index: int
    dim: int
    bounds: Optional[FrameBounds]


@dataclass(frozen=True)
class FrameBoundsReport:
    fibers: Tuple[FiberFrameBounds, ...]
    lower: Optional[float]
    upper: Optional[float]
    is_riesz: bool

    @property
    def is_frame(self) -> bool:
        return self.lower is not None and self.lower > 0


def range_function(gen_set: FiberedGeneratorSet, tol: RankTolerance = DEFAULT_TOLERANCE) -> List[Subspace]:
    """J(x_j) = span of the generator fiber values at x_j."""
    reference = gen_set.scale()
    return [
        orthonormal_basis(gen_set.values[j], tol, reference_scale=reference)
        for j in range(len(gen_set))
    ]


def spectrum(rf: Sequence[Subspace]) -> frozenset:
    """Fibers where the range function is nonzero."""
    return frozenset(j for j, J in enumerate(rf) if J.dim >= 1)


def omega(rfA: Sequence[Subspace], rfB: Sequence[Subspace]) -> frozenset:
    """Common spectrum of two range functions."""
    if len(rfA) != len(rfB):
        raise GridMismatchError(f'Range functions on {len(rfA)} and {len(rfB)} fibers')
    return spectrum(rfA) & spectrum(rfB)


def _intersecting(rfA, rfB, indices, tol) -> frozenset:
    return frozenset(j for j in indices if intersection_dimension(rfA[j], rfB[j], tol) > 0)


def omega_prime(setA: FiberedGeneratorSet, setB: FiberedGeneratorSet, tol: RankTolerance = DEFAULT_TOLERANCE) -> frozenset:
    """Fibers of Omega where J_A(x) and J_B(x) intersect trivially."""
    check_same_grid(setA, setB)
    rfA, rfB = range_function(setA, tol), range_function(setB, tol)
    common = omega(rfA, rfB)
    return common - _intersecting(rfA, rfB, common, tol)


def intersection_spectrum(setA: FiberedGeneratorSet, setB: FiberedGeneratorSet, tol: RankTolerance = DEFAULT_TOLERANCE) -> frozenset:
    """Fibers where J_A(x) and J_B(x) share a direction: the spectrum of S(A) cap S(B)."""
    check_same_grid(setA, setB)
    rfA, rfB = range_function(setA, tol), range_function(setB, tol)
    return _intersecting(rfA, rfB, omega(rfA, rfB), tol)


def _max_over(fibers: Sequence[FiberAngle], region: frozenset) -> Tuple[float, Optional[int]]:
    best, best_index = 0.0, None
    for j in sorted(region):
        if best_index is None or fibers[j].angle > best:
            best, best_index = fibers[j].angle, j
    return best, best_index


def ess_sup_angle(
    setA: FiberedGeneratorSet,
    setB: FiberedGeneratorSet,
    region: Optional[Iterable[int]] = None,
    tol: RankTolerance = DEFAULT_TOLERANCE,
) -> AngleProfile:
    """Fiberwise supremum cosine angles and their maximum over ``region``.

    Each fiber angle is computed twice, from orthonormal bases of the range
    functions and from the Gramian formula; a gap above
    ROUTE_ERROR_THRESHOLD raises NumericalInconsistencyError. The region
    defaults to Omega.
    """
    check_same_grid(setA, setB)
    rfA, rfB = range_function(setA, tol), range_function(setB, tol)
    common = omega(rfA, rfB)
    intersecting = _intersecting(rfA, rfB, common, tol)
    region = common if region is None else setA.grid.check_region(region)

    # Shared cutoffs so both routes see the same ranks as the range function.
    ref_a, ref_b = setA.scale() ** 2, setB.scale() ** 2

    fibers = []
    for j in range(len(setA)):
        basis_angle = sup_cosine_angle(rfA[j], rfB[j])
        gap = 0.0
        if j in common:
            fibA, fibB = setA.fiber(j), setB.fiber(j)
            G_A, G_B = gramian(fibA), gramian(fibB)
            G_mix = mixed_gramian(fibA, fibB)
            gramian_angle = fiber_angle_via_gramian(
                G_A, G_B, G_mix, tol, reference_a=ref_a, reference_b=ref_b,
            )
            gap = abs(gramian_angle - basis_angle)
            if gap > ROUTE_ERROR_THRESHOLD:
                raise NumericalInconsistencyError(
                    f'Fiber {setA.grid.labels[j]}: basis angle {basis_angle!r} and '
                    f'Gramian angle {gramian_angle!r} disagree by {gap:.3e}',
                    fiber_index=j,
                    gap=gap,
                )
            if gap > ROUTE_WARNING_THRESHOLD:
                logger.warning('Route gap %.3e at fiber %s', gap, setA.grid.labels[j])
        fibers.append(FiberAngle(
            index=j,
            angle=basis_angle,
            dim_a=rfA[j].dim,
            dim_b=rfB[j].dim,
            in_omega=j in common,
            in_omega_prime=j in common and j not in intersecting,
            route_gap=gap,
        ))

    omega_p = common - intersecting
    ess_sup, argmax = _max_over(fibers, region)
    profile = AngleProfile(
        grid=setA.grid,
        fibers=tuple(fibers),
        region=region,
        ess_sup=ess_sup,
        argmax=argmax,
        ess_sup_omega=_max_over(fibers, common)[0],
        ess_sup_omega_prime=_max_over(fibers, omega_p)[0],
    )
    logger.debug(
        'Angle profile over %d fibers: ess-sup %.17g at %s (|Omega|=%d, |Omega\'|=%d)',
        len(fibers), ess_sup, profile.argmax_label, len(common), len(omega_p),
    )
    return profile


def closedness_diagnosis(setA: FiberedGeneratorSet, setB: FiberedGeneratorSet, tol: RankTolerance = DEFAULT_TOLERANCE) -> ClosednessReport:
    """Closedness of the sum restricted to Omega'.

    The sum is declared closed when the max fiber angle over Omega' stays
    at or below 1 - close_threshold; fibers above it are witnesses.
    """
    check_same_grid(setA, setB)
    omega_p = omega_prime(setA, setB, tol)
    profile = ess_sup_angle(setA, setB, omega_p, tol)
    limit = 1.0 - tol.close_threshold
    witnesses = tuple(j for j in sorted(omega_p) if profile.fibers[j].angle > limit)
    intersecting = tuple(
        f.index for f in profile.fibers if f.in_omega and not f.in_omega_prime
    )
    closed = profile.ess_sup <= limit
    logger.info(
        'Closedness: %s (ess-sup over Omega\' %.17g, %d witnesses, %d intersection fibers)',
        'closed' if closed else 'not closed', profile.ess_sup, len(witnesses), len(intersecting),
    )
    return ClosednessReport(
        closed=closed,
        ess_sup_omega_prime=profile.ess_sup,
        witnesses=witnesses,
        intersection_fibers=intersecting,
        profile=profile,
    )


def restrict(gen_set: FiberedGeneratorSet, region: Iterable[int]) -> FiberedGeneratorSet:
    """Zero the generator fibers outside ``region``; the grid is unchanged."""
    region = gen_set.grid.check_region(region)
    mask = np.zeros(len(gen_set), dtype=bool)
    mask[list(region)] = True
    values = np.where(mask[:, None, None], gen_set.values, 0)
    return FiberedGeneratorSet(gen_set.grid, values)


def frame_bounds(gen_set: FiberedGeneratorSet, tol: RankTolerance = DEFAULT_TOLERANCE) -> FrameBoundsReport:
    """Fiber frame bounds and the uniform bounds of the generated system.

    The system is a frame for its span with bounds (min lower, max upper)
    over the spectrum, and a Riesz sequence when every fiber of the grid
    carries a full-rank Gramian.
    """
    rf = range_function(gen_set, tol)
    reference = gen_set.scale() ** 2
    fibers = []
    for j, J in enumerate(rf):
        bounds = None
        if J.dim:
            bounds = fiber_frame_bounds(gramian(gen_set.fiber(j)), tol, reference)
        fibers.append(FiberFrameBounds(index=j, dim=J.dim, bounds=bounds))

    present = [f.bounds for f in fibers if f.bounds is not None]
    lower = min((b.lower for b in present), default=None)
    upper = max((b.upper for b in present), default=None)
    is_riesz = all(f.dim == gen_set.r for f in fibers)
    return FrameBoundsReport(fibers=tuple(fibers), lower=lower, upper=upper, is_riesz=is_riesz)
