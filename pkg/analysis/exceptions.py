"""Exception hierarchy for fiberwise analyses.

Shape and value problems also subclass ValueError so callers that only
know about builtins still catch them.
"""


class FiberAnalysisError(Exception):
    """Base class for every error raised by the analysis package."""


class DimensionMismatchError(FiberAnalysisError, ValueError):
    """Vectors, matrices or subspaces with incompatible shapes."""


class GridMismatchError(FiberAnalysisError, ValueError):
    """Fibered sets that do not live on the same grid or fiber dimension."""


class InvalidGramianError(FiberAnalysisError, ValueError):
    """A Gramian that is mixed where a plain one is needed, or not Hermitian."""


class InvalidRegionError(FiberAnalysisError, ValueError):
    """A fiber region naming indices outside the grid."""


class InvalidSubgroupElementError(FiberAnalysisError, ValueError):
    """A group element that does not belong to the subgroup."""


class InvalidToleranceError(FiberAnalysisError, ValueError):
    """A tolerance outside the open interval (0, 1)."""


class ProfileEvaluationError(FiberAnalysisError):
    """A Fourier profile failed or returned non-finite values."""


class EmptyTargetsError(FiberAnalysisError, ValueError):
    """A union check was requested without any target set."""


class ConfigurationError(FiberAnalysisError):
    """An instance config that cannot be read or resolved."""


class NumericalInconsistencyError(FiberAnalysisError):
    """Two independent computations of the same quantity disagree.

    Usually a sign of ill-conditioned fibers: the Gramian route and the
    orthonormal-basis route of the fiber angle drift apart.
    """

    def __init__(self, message, *, fiber_index=None, gap=None):
        super().__init__(message)
        self.fiber_index = fiber_index
        self.gap = gap
