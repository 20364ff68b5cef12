"""Exception hierarchy shared across the package."""


class ExpFamError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ExpFamError, ValueError):
    """Input data violates a documented invariant (bad probabilities,
    non-finite values, malformed shapes)."""


class DimensionMismatchError(ExpFamError, ValueError):
    """A vector or matrix does not match the family's support size or
    statistic dimension."""


class DocumentFormatError(ExpFamError, ValueError):
    """A family or reward-problem document could not be parsed."""


class SolveFailedError(ExpFamError, RuntimeError):
    """A moment-matching solve did not converge.

    Carries the full :class:`~expfam.projection.SolveReport` in ``report``
    so callers can inspect the trace.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InfeasibleBoundaryError(SolveFailedError):
    """The target moment lies on or outside the boundary of the moment
    polytope, so no finite parameter attains it."""
