"""Concrete (group, subgroup) realizations.

Finite groups: G = Z_N with subgroup Gamma = M Z_N of order L = N / M. The
Zak transform is a bank of length-L DFTs, one per coset c in {0, ..., M-1}:

    (Zf)(alpha, c) = sum_t f(t M + c) exp(-2 pi i alpha t / L)

It is unitary with counting measure on Z_N and weight 1/L per character,
and turns translation by t M into multiplication by exp(-2 pi i alpha t / L).

Real line: fiberization (Ff)(xi)(k) = f_hat(xi + k), truncated to |k| <= K
and sampled on a grid in [0, 1).
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import config
from .exceptions import DimensionMismatchError, InvalidSubgroupElementError
from .fiber_field import FiberedGeneratorSet, FiberGrid
from .profiles import FourierProfile

logger = logging.getLogger(__name__)

# Truncation tails above this are logged.
TAIL_WARNING_THRESHOLD = 1e-12


@dataclass(frozen=True)
class FiniteGroupPair:
    """Z_N with the subgroup of index M."""

    N: int
    M: int

    def __post_init__(self):
        if self.M < 1 or self.N < 1 or self.N % self.M:
            raise DimensionMismatchError(f'M must divide N with M >= 1, got N={self.N}, M={self.M}')

    @property
    def L(self) -> int:
        return self.N // self.M

    @property
    def subgroup(self) -> np.ndarray:
        return np.arange(0, self.N, self.M)

    @property
    def coset_representatives(self) -> np.ndarray:
        return np.arange(self.M)

    @property
    def dual_labels(self) -> np.ndarray:
        return np.arange(self.L)

    def contains(self, gamma: int) -> bool:
        return int(gamma) % self.M == 0

    def check_vector(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=complex).ravel()
        if f.shape[0] != self.N:
            raise DimensionMismatchError(f'Expected a vector of length {self.N}, got {f.shape[0]}')
        return f

    def grid(self) -> FiberGrid:
        """Dual grid: one fiber per character alpha, weight 1/L each."""
        L = self.L
        return FiberGrid(
            self.dual_labels / L,
            np.full(L, 1.0 / L),
            tuple(str(alpha) for alpha in range(L)),
        )


@dataclass(frozen=True, eq=False)
class ZakArray:
    """Zak transform values indexed (alpha, coset)."""

    values: np.ndarray
    pair: FiniteGroupPair

    def __post_init__(self):
        if self.values.shape != (self.pair.L, self.pair.M):
            raise DimensionMismatchError(
                f'Zak array of shape {self.values.shape} for L={self.pair.L}, M={self.pair.M}'
            )

    def weighted_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) / self.pair.L))


def zak_forward(f, pair: FiniteGroupPair) -> ZakArray:
    f = pair.check_vector(f)
    # Row t holds f(t M + c) for c = 0..M-1.
    return ZakArray(np.fft.fft(f.reshape(pair.L, pair.M), axis=0), pair)


def zak_inverse(z: ZakArray, pair: FiniteGroupPair) -> np.ndarray:
    values = np.asarray(z.values if isinstance(z, ZakArray) else z, dtype=complex)
    if values.shape != (pair.L, pair.M):
        raise DimensionMismatchError(
            f'Zak array of shape {values.shape} for L={pair.L}, M={pair.M}'
        )
    return np.fft.ifft(values, axis=0).reshape(pair.N)


def translate(f, gamma: int) -> np.ndarray:
    """(L_gamma f)(x) = f(x - gamma mod N)."""
    f = np.asarray(f, dtype=complex).ravel()
    return np.roll(f, int(gamma) % f.shape[0])


def intertwine_check(f, gamma: int, pair: FiniteGroupPair) -> float:
    """Max deviation between Z(L_gamma f) and the modulated Zf, for gamma in Gamma."""
    if not pair.contains(gamma):
        raise InvalidSubgroupElementError(f'{gamma} is not a multiple of M={pair.M}')
    f = pair.check_vector(f)
    t = (int(gamma) % pair.N) // pair.M
    modulation = np.exp(-2j * np.pi * pair.dual_labels * t / pair.L)
    shifted = zak_forward(translate(f, gamma), pair).values
    expected = modulation[:, None] * zak_forward(f, pair).values
    return float(np.max(np.abs(shifted - expected)))


def fiberize_group(generators: Sequence, pair: FiniteGroupPair) -> FiberedGeneratorSet:
    """Fibered set over the L characters; fiber of psi_i at alpha is (Z psi_i)(alpha, .)."""
    if not len(generators):
        raise DimensionMismatchError('At least one generator is required')
    zaks = [zak_forward(g, pair).values for g in generators]
    # (L, M, r): fiber index, coset, generator
    values = np.stack(zaks, axis=-1)
    return FiberedGeneratorSet(pair.grid(), values)


def fiberize_real_line(
    profiles: Sequence[FourierProfile],
    grid_size: int,
    truncation: int = config.TRUNCATION,
    sampling: str = 'midpoint',
) -> FiberedGeneratorSet:
    """Fibered set of f_hat_i(xi_j + k), k = -K..K, on a grid of [0, 1)."""
    if grid_size < 1 or truncation < 0:
        raise DimensionMismatchError(f'Need grid_size >= 1 and truncation >= 0, got {grid_size}, {truncation}')
    if not len(profiles):
        raise DimensionMismatchError('At least one profile is required')
    if sampling == 'midpoint':
        grid = FiberGrid.midpoint(grid_size)
    elif sampling == 'left':
        grid = FiberGrid.left(grid_size)
    else:
        raise ValueError(f'Unknown grid sampling rule: {sampling!r}')

    ks = np.arange(-truncation, truncation + 1)
    arguments = grid.points[:, None] + ks[None, :]
    columns = []
    for profile in profiles:
        columns.append(profile(arguments))
        tail = profile.tail_bound(truncation)
        if tail > TAIL_WARNING_THRESHOLD:
            logger.warning('%r loses up to %.3e of squared mass at truncation K=%d', profile, tail, truncation)
    return FiberedGeneratorSet(grid, np.stack(columns, axis=-1))
