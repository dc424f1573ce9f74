"""Exception hierarchy for the extremal polynomial laboratory."""

from typing import Any, Optional


class LabError(Exception):
    """Base class for every error raised by the laboratory."""
    pass


class GeometryError(LabError):
    """Errors raised while building or evaluating exterior maps."""
    pass


class InvalidMapError(GeometryError):
    """Exterior map fails the injectivity or smoothness checks."""
    pass


class NoConvergenceError(GeometryError):
    """Newton inversion of the exterior map did not converge."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class InsideRegionError(GeometryError):
    """Point lies in K (or on its boundary) where Omega was required."""
    pass


class MeasureError(LabError):
    """Errors raised while building discretized measures."""
    pass


class AtomOutsideRegionError(MeasureError):
    """An atom of the singular part lies in Omega."""
    pass


class InteriorAtomNotPushableError(MeasureError):
    """Interior atoms have no image on the unit circle."""
    pass


class DensityError(MeasureError):
    """Density spec cannot be evaluated where it was requested."""
    pass


class SzegoError(LabError):
    """Errors raised by the Szego/outer function layer."""
    pass


class NonSzegoError(SzegoError):
    """The density does not satisfy the Szego condition at working precision."""
    pass


class FaberError(LabError):
    """Errors raised while computing Faber polynomials."""
    pass


class DegreeTooLargeForGridError(FaberError):
    """Requested degree needs a finer grid (16n > M)."""
    pass


class ChristoffelError(LabError):
    """Errors raised by the L^r Christoffel solvers."""
    pass


class RankDeficientError(ChristoffelError):
    """Gram matrix is singular in a way the solver cannot resolve."""
    pass


class IrlsNoConvergenceError(ChristoffelError):
    """IRLS hit its iteration cap; the best iterate is attached."""

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


class MinimaxError(LabError):
    """Errors raised by the Lawson minimax solver."""
    pass


class StalledGapError(MinimaxError):
    """Lawson iteration stopped before reaching the requested duality gap."""

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


class RhoTooSparseError(MinimaxError):
    """Weight is positive on fewer than n+1 support points."""
    pass


class AhlforsPointError(MinimaxError):
    """The Ahlfors problem was posed at z0 = infinity."""
    pass


class ConfigInvalidError(LabError):
    """Experiment configuration failed validation."""

    def __init__(self, field: str, message: str):
        super().__init__(f"Invalid config field '{field}': {message}")
        self.field = field
