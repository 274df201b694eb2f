"""Per-fiber frame operators and Gramians.

Inner products are linear in the first argument and conjugate-linear in
the second: <h, g> = sum_k h_k conj(g_k). With generators stacked as the
columns of Psi, the analysis operator is Psi^H, synthesis is Psi, the
Gramian is Psi^H Psi and the mixed Gramian of (Psi, Phi) is Phi^H Psi.
"""

import enum
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, InvalidGramianError
from .subspace_geometry import DEFAULT_TOLERANCE, RankTolerance

logger = logging.getLogger(__name__)

# Entrywise Hermitian defect accepted before a Gramian is rejected,
# relative to its largest entry.
HERMITIAN_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class GeneratorFiber:
    """Fiber values psi_1(x), ..., psi_r(x) stored as the columns of an m x r matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[1] < 1:
            raise DimensionMismatchError('A generator fiber needs at least one m-vector')

    @classmethod
    def from_vectors(cls, vectors) -> 'GeneratorFiber':
        vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        if not vectors:
            raise DimensionMismatchError('A generator fiber needs at least one m-vector')
        if len({v.shape[0] for v in vectors}) != 1:
            raise DimensionMismatchError('Generator fiber vectors have mismatched lengths')
        return cls(np.column_stack(vectors))

    @property
    def r(self) -> int:
        return self.matrix.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list:
        return [self.matrix[:, i] for i in range(self.r)]


class GramianRole(enum.Enum):
    PLAIN = 'plain'
    MIXED = 'mixed'


@dataclass(frozen=True, eq=False)
class GramianMatrix:
    entries: np.ndarray
    role: GramianRole = GramianRole.PLAIN

    @property
    def shape(self):
        return self.entries.shape


class FrameBounds(NamedTuple):
    lower: float
    upper: float


def analysis_apply(fib: GeneratorFiber, h) -> np.ndarray:
    """T(x)h = (<h, psi_i(x)>)_i."""
    h = np.asarray(h, dtype=complex).ravel()
    if h.shape[0] != fib.ambient_dim:
        raise DimensionMismatchError(
            f'Vector of length {h.shape[0]} against fibers of length {fib.ambient_dim}'
        )
    return fib.matrix.conj().T @ h


def synthesis_apply(fib: GeneratorFiber, c) -> np.ndarray:
    """T*(x)c = sum_i c_i psi_i(x)."""
    c = np.asarray(c, dtype=complex).ravel()
    if c.shape[0] != fib.r:
        raise DimensionMismatchError(f'{c.shape[0]} coefficients for {fib.r} generators')
    return fib.matrix @ c


def mixed_gramian(fibA: GeneratorFiber, fibB: GeneratorFiber) -> GramianMatrix:
    """Entry (i, j) = <psi_j, phi_i> with psi from fibA and phi from fibB (r_B x r_A)."""
    if fibA.ambient_dim != fibB.ambient_dim:
        raise DimensionMismatchError(
            f'Fiber dimensions differ: {fibA.ambient_dim} vs {fibB.ambient_dim}'
        )
    return GramianMatrix(fibB.matrix.conj().T @ fibA.matrix, GramianRole.MIXED)


def gramian(fib: GeneratorFiber) -> GramianMatrix:
    """Entry (i, j) = <psi_j, psi_i>."""
    return GramianMatrix(mixed_gramian(fib, fib).entries, GramianRole.PLAIN)


def _hermitian_eigh(G: GramianMatrix):
    if G.role is not GramianRole.PLAIN:
        raise InvalidGramianError('Expected a plain Gramian, got a mixed one')
    entries = G.entries
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise InvalidGramianError(f'Gramian must be square, got shape {entries.shape}')
    scale = max(1.0, float(np.max(np.abs(entries), initial=0.0)))
    defect = float(np.max(np.abs(entries - entries.conj().T), initial=0.0))
    if defect > HERMITIAN_TOLERANCE * scale:
        raise InvalidGramianError(f'Gramian is not Hermitian (defect {defect:.3e})')
    return scipy.linalg.eigh((entries + entries.conj().T) / 2)


def _eigen_cutoff(w: np.ndarray, tol: RankTolerance, reference: Optional[float]) -> float:
    top = float(w[-1]) if w.size else 0.0
    if reference is not None:
        top = max(top, reference)
    return tol.relative_threshold * top


def pinv_sqrt(G: GramianMatrix, tol: RankTolerance = DEFAULT_TOLERANCE, reference: Optional[float] = None) -> np.ndarray:
    """(G^dagger)^{1/2} through the eigendecomposition of G.

    Eigenvalues at or above ``relative_threshold`` times the largest one
    (or ``reference``, if bigger) map to lambda^{-1/2}; the rest map to 0.
    """
    w, u = _hermitian_eigh(G)
    if w.size == 0 or w[-1] <= 0:
        return np.zeros_like(G.entries, dtype=complex)
    keep = w >= _eigen_cutoff(w, tol, reference)
    inv_sqrt = np.zeros_like(w)
    inv_sqrt[keep] = 1.0 / np.sqrt(w[keep])
    return (u * inv_sqrt) @ u.conj().T


def fiber_angle_via_gramian(
    G_A: GramianMatrix,
    G_B: GramianMatrix,
    G_mix: GramianMatrix,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    reference_a: Optional[float] = None,
    reference_b: Optional[float] = None,
) -> float:
    """|| (G_B^dagger)^{1/2} G_mix (G_A^dagger)^{1/2} ||, clamped to [0, 1].

    G_mix is ``mixed_gramian(fibA, fibB)``, of shape r_B x r_A. The
    references are passed through to ``pinv_sqrt`` for each family.
    """
    r_a, r_b = G_A.shape[0], G_B.shape[0]
    if G_mix.shape != (r_b, r_a):
        raise DimensionMismatchError(
            f'Mixed Gramian of shape {G_mix.shape} does not fit Gramians {G_A.shape} and {G_B.shape}'
        )
    if not np.any(G_mix.entries):
        return 0.0
    product = pinv_sqrt(G_B, tol, reference_b) @ G_mix.entries @ pinv_sqrt(G_A, tol, reference_a)
    top = float(scipy.linalg.svdvals(product)[0])
    return min(max(top, 0.0), 1.0)


def fiber_frame_bounds(
    G: GramianMatrix,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    reference: Optional[float] = None,
) -> Optional[FrameBounds]:
    """Extreme nonzero eigenvalues of a fiber Gramian.

    Returns None for a zero Gramian: the fiber lies outside the spectrum.
    """
    w, _ = _hermitian_eigh(G)
    if w.size == 0 or w[-1] <= 0:
        return None
    nonzero = w[w >= _eigen_cutoff(w, tol, reference)]
    if nonzero.size == 0:
        return None
    return FrameBounds(float(nonzero[0]), float(nonzero[-1]))


def numerical_rank(matrix, tol: RankTolerance = DEFAULT_TOLERANCE, reference: Optional[float] = None) -> int:
    """Singular values at or above ``relative_threshold`` times the largest one (or ``reference``)."""
    matrix = np.asarray(matrix)
    if matrix.size == 0 or not np.any(matrix):
        return 0
    s = scipy.linalg.svdvals(matrix)
    top = float(s[0]) if reference is None else max(float(s[0]), reference)
    return int(np.count_nonzero(s >= tol.relative_threshold * top))
