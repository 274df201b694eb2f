"""Closed-form Fourier profiles xi -> f_hat(xi) on the real line.

Profiles are named in instance configs by keyword. Each one knows a bound
on the squared mass it loses when its fibers are truncated to |k| <= K.
"""

import logging
import math
import os

import numpy as np
from cachetools import LRUCache, cached

from .config import PROFILE_CACHE_SIZE
from .exceptions import ConfigurationError, ProfileEvaluationError

logger = logging.getLogger(__name__)


class FourierProfile:
    """Base class: subclasses implement ``_evaluate`` on a float array."""

    kind = 'profile'

    def __init__(self, scale: complex = 1.0):
        self.scale = complex(scale)

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        try:
            values = self.scale * np.asarray(self._evaluate(xi), dtype=complex)
        except Exception as e:
            raise ProfileEvaluationError(f'{self!r} failed to evaluate: {e}') from e
        if values.shape != xi.shape or not np.all(np.isfinite(values)):
            raise ProfileEvaluationError(f'{self!r} returned non-finite or misshapen values')
        return values

    def _evaluate(self, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def tail_bound(self, truncation: int) -> float:
        """Upper bound on sum_{|k| > K} |f_hat(xi + k)|^2 for xi in [0, 1)."""
        return math.inf

    def _scaled(self, bound: float) -> float:
        return abs(self.scale) ** 2 * bound

    def __repr__(self):
        return f'{type(self).__name__}()'


class Gaussian(FourierProfile):
    """f_hat(xi) = exp(-a pi xi^2)."""

    kind = 'gaussian'

    def __init__(self, a: float = 1.0, scale: complex = 1.0):
        super().__init__(scale)
        if a <= 0:
            raise ConfigurationError(f'gaussian needs a > 0, got {a!r}')
        self.a = float(a)

    def _evaluate(self, xi):
        return np.exp(-self.a * np.pi * xi ** 2)

    def tail_bound(self, truncation):
        # Terms decay at least geometrically past |k| = K.
        K = truncation
        ratio = math.exp(-2 * self.a * math.pi * (2 * K + 1))
        return self._scaled(2 * math.exp(-2 * self.a * math.pi * K ** 2) / (1 - ratio))

    def __repr__(self):
        return f'Gaussian(a={self.a!r})'


class BSpline(FourierProfile):
    """f_hat(xi) = sinc(xi)^(p+1), sinc(0) = 1."""

    kind = 'bspline'

    def __init__(self, p: int = 0, scale: complex = 1.0):
        super().__init__(scale)
        if p < 0:
            raise ConfigurationError(f'bspline needs p >= 0, got {p!r}')
        self.p = int(p)

    def _evaluate(self, xi):
        return np.sinc(xi) ** (self.p + 1)

    def tail_bound(self, truncation):
        # |sinc(xi + k)| <= 1 / (pi |xi + k|) and |xi + k| >= K beyond the window.
        K = truncation
        q = 2 * (self.p + 1)
        if K < 1:
            return math.inf
        return self._scaled(2 * math.pi ** -q * (K ** -q + K ** (1 - q) / (q - 1)))

    def __repr__(self):
        return f'BSpline(p={self.p!r})'


class Bandlimit(FourierProfile):
    """Indicator of [c, d)."""

    kind = 'bandlimit'

    def __init__(self, c: float = 0.0, d: float = 1.0, scale: complex = 1.0):
        super().__init__(scale)
        if not c < d:
            raise ConfigurationError(f'bandlimit needs c < d, got [{c!r}, {d!r})')
        self.c, self.d = float(c), float(d)

    def _evaluate(self, xi):
        return ((xi >= self.c) & (xi < self.d)).astype(float)

    def tail_bound(self, truncation):
        K = truncation
        # Integer shifts outside the window that can still hit [c, d).
        above = max(0, math.ceil(self.d - (K + 1)))
        below = max(0, math.ceil(-K - self.c))
        return self._scaled(float(above + below))

    def __repr__(self):
        return f'Bandlimit(c={self.c!r}, d={self.d!r})'


class Delta(FourierProfile):
    """f_hat = 1: the point mass at the origin, only meaningful truncated."""

    kind = 'delta'

    def _evaluate(self, xi):
        return np.ones_like(xi)


class Rotation(FourierProfile):
    """Fiber (cos theta(xi), sin theta(xi)) on k = 0, 1 with theta(x) = theta0 + slope x.

    f_hat is cos(theta(xi)) on [0, 1), sin(theta(xi - 1)) on [1, 2) and 0
    elsewhere.
    """

    kind = 'rotation'

    def __init__(self, theta0: float = 0.0, slope: float = 0.0, scale: complex = 1.0):
        super().__init__(scale)
        self.theta0, self.slope = float(theta0), float(slope)

    def _evaluate(self, xi):
        first = (xi >= 0) & (xi < 1)
        second = (xi >= 1) & (xi < 2)
        return np.where(
            first, np.cos(self.theta0 + self.slope * xi),
            np.where(second, np.sin(self.theta0 + self.slope * (xi - 1)), 0.0),
        )

    def tail_bound(self, truncation):
        return 0.0 if truncation >= 1 else self._scaled(1.0)

    def __repr__(self):
        return f'Rotation(theta0={self.theta0!r}, slope={self.slope!r})'


@cached(cache=LRUCache(maxsize=PROFILE_CACHE_SIZE))
def load_profile_table(path: str):
    """Read a two-column (xi, value) CSV; rows sorted by xi. Cached per path."""
    logger.debug('Loading profile table from %s', path)
    try:
        table = np.loadtxt(path, delimiter=',', comments='#', ndmin=2)
    except (OSError, ValueError) as e:
        raise ConfigurationError(f'Could not read profile table {path}: {e}') from e
    if table.shape[1] != 2 or table.shape[0] < 2:
        raise ConfigurationError(f'Profile table {path} needs two columns and at least two rows')
    order = np.argsort(table[:, 0], kind='stable')
    xs, ys = table[order, 0], table[order, 1]
    xs.setflags(write=False)
    ys.setflags(write=False)
    logger.info('Loaded profile table %s with %d rows', path, xs.size)
    return xs, ys


class CustomTable(FourierProfile):
    """Linear interpolation of a tabulated profile, zero outside the table."""

    kind = 'custom-table'

    def __init__(self, path: str, scale: complex = 1.0):
        super().__init__(scale)
        self.path = os.path.abspath(path)
        self.xs, self.ys = load_profile_table(self.path)

    def _evaluate(self, xi):
        return np.interp(xi, self.xs, self.ys, left=0.0, right=0.0)

    def tail_bound(self, truncation):
        K = truncation
        if self.xs[0] >= -K and self.xs[-1] < K + 1:
            return 0.0
        return math.inf

    def __repr__(self):
        return f'CustomTable(path={self.path!r})'


PROFILE_KINDS = {
    cls.kind: cls for cls in (Gaussian, BSpline, Bandlimit, Delta, Rotation, CustomTable)
}


def build_profile(spec: dict) -> FourierProfile:
    """Instantiate a profile from a validated spec dict ({'kind': ..., params})."""
    params = dict(spec)
    kind = params.pop('kind')
    try:
        cls = PROFILE_KINDS[kind]
    except KeyError:
        raise ConfigurationError(f'Unknown profile kind: {kind!r}') from None
    return cls(**params)


def truncation_tail(profile: FourierProfile, truncation: int, xi: float, extra: int = 4096) -> float:
    """Direct evaluation of sum_{K < |k| <= K + extra} |f_hat(xi + k)|^2."""
    ks = np.concatenate([
        np.arange(truncation + 1, truncation + extra + 1),
        -np.arange(truncation + 1, truncation + extra + 1),
    ])
    return float(np.sum(np.abs(profile(xi + ks)) ** 2))
