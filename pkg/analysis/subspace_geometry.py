"""Finite-dimensional complex subspace primitives.

Subspaces are held as orthonormal bases (m x k, k = 0 for the zero
subspace). Angles are read off singular values of Q_F^H Q_E, the usual
principal-angle construction.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatchError, InvalidToleranceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankTolerance:
    """Discretization policy for rank, intersection and closedness decisions."""

    relative_threshold: float = 1e-10
    intersect_threshold: float = 1e-8
    close_threshold: float = 1e-6

    def __post_init__(self):
        for name in ('relative_threshold', 'intersect_threshold', 'close_threshold'):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise InvalidToleranceError(f'{name} must lie in (0, 1), got {value!r}')

    def replace(self, **overrides) -> 'RankTolerance':
        values = {
            'relative_threshold': self.relative_threshold,
            'intersect_threshold': self.intersect_threshold,
            'close_threshold': self.close_threshold,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RankTolerance(**values)


DEFAULT_TOLERANCE = RankTolerance()


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis of a subspace of C^m plus the tolerance that built it."""

    ambient_dim: int
    basis: np.ndarray
    tol: RankTolerance = DEFAULT_TOLERANCE

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @classmethod
    def zero(cls, ambient_dim: int, tol: RankTolerance = DEFAULT_TOLERANCE) -> 'Subspace':
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex), tol)

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def _as_matrix(vectors, ambient_dim: Optional[int]) -> np.ndarray:
    """Stack vectors as columns of an m x r complex matrix."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        matrix = vectors.astype(complex, copy=False)
        if ambient_dim is not None and matrix.shape[0] != ambient_dim:
            raise DimensionMismatchError(
                f'Expected vectors of length {ambient_dim}, got {matrix.shape[0]}'
            )
        return matrix

    vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vectors:
        if ambient_dim is None:
            raise DimensionMismatchError('Empty vector list needs an explicit ambient dimension')
        return np.zeros((ambient_dim, 0), dtype=complex)

    lengths = {v.shape[0] for v in vectors}
    if len(lengths) != 1:
        raise DimensionMismatchError(f'Vectors have mismatched lengths: {sorted(lengths)}')
    m = lengths.pop()
    if ambient_dim is not None and m != ambient_dim:
        raise DimensionMismatchError(f'Expected vectors of length {ambient_dim}, got {m}')
    if m < 1:
        raise DimensionMismatchError('Vectors must have length >= 1')
    return np.column_stack(vectors)


def orthonormal_basis(
    vectors,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    ambient_dim: Optional[int] = None,
    reference_scale: Optional[float] = None,
) -> Subspace:
    """Orthonormalize vectors into a Subspace.

    Singular values below ``relative_threshold`` times the largest one are
    discarded. ``reference_scale`` replaces the local largest singular value
    when it is bigger, so a family of fibers can share one cutoff.
    """
    matrix = _as_matrix(vectors, ambient_dim)
    m = matrix.shape[0]
    if matrix.shape[1] == 0 or not np.any(matrix):
        return Subspace.zero(m, tol)

    u, s, _ = scipy.linalg.svd(matrix, full_matrices=False)
    scale = s[0] if reference_scale is None else max(s[0], reference_scale)
    k = int(np.count_nonzero(s >= tol.relative_threshold * scale))
    return Subspace(m, u[:, :k], tol)


def _check_same_ambient(E: Subspace, F: Subspace):
    if E.ambient_dim != F.ambient_dim:
        raise DimensionMismatchError(
            f'Ambient dimensions differ: {E.ambient_dim} vs {F.ambient_dim}'
        )


def principal_cosines(E: Subspace, F: Subspace) -> np.ndarray:
    """Cosines of the principal angles, largest first, clamped to [0, 1]."""
    _check_same_ambient(E, F)
    if E.is_zero or F.is_zero:
        return np.zeros(0)
    s = scipy.linalg.svdvals(F.basis.conj().T @ E.basis)
    return np.clip(s, 0.0, 1.0)


def sup_cosine_angle(E: Subspace, F: Subspace) -> float:
    """Supremum cosine angle: sup over unit u in E of ||P_F u||.

    Zero if either subspace is {0}.
    """
    cosines = principal_cosines(E, F)
    if cosines.size == 0:
        return 0.0
    return float(cosines[0])


def project(E: Subspace, v) -> np.ndarray:
    """Orthogonal projection of v onto E."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape[0] != E.ambient_dim:
        raise DimensionMismatchError(
            f'Vector of length {v.shape[0]} in ambient dimension {E.ambient_dim}'
        )
    if E.is_zero:
        return np.zeros_like(v)
    return E.basis @ (E.basis.conj().T @ v)


def intersection_dimension(E: Subspace, F: Subspace, tol: RankTolerance = DEFAULT_TOLERANCE) -> int:
    """Number of principal cosines within ``intersect_threshold`` of 1."""
    cosines = principal_cosines(E, F)
    return int(np.count_nonzero(cosines >= 1.0 - tol.intersect_threshold))


def subspace_sum(E: Subspace, F: Subspace, tol: RankTolerance = DEFAULT_TOLERANCE) -> Subspace:
    """Orthonormal basis of E + F."""
    _check_same_ambient(E, F)
    return orthonormal_basis(np.hstack([E.basis, F.basis]), tol, ambient_dim=E.ambient_dim)
