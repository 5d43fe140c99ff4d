"""Exception types shared across the package."""


class LambdahullError(Exception):
    """Base class for all package errors."""


class EmptyBodyError(LambdahullError):
    """The requested ball intersection has no point."""


class InvalidParamError(LambdahullError, ValueError):
    """A body or solver parameter is out of its admissible range."""


class NonConvergenceError(LambdahullError):
    """An iterative solver stalled in an ambiguous state.

    Raised instead of silently returning a low-quality answer; callers can
    retry with looser tolerances or a larger iteration budget.
    """


class UnsupportedError(LambdahullError):
    """The operation is not defined for this body type or dimension."""


class DegenerateSupportError(LambdahullError):
    """A support set needed by a solver collapsed (e.g. all points equal)."""


class HemisphereViolationError(LambdahullError):
    """A touching set lies in an open hemisphere, so no inball exists there."""


class RejectionExhaustedError(LambdahullError):
    """Rejection sampling hit its cap without producing an admissible set."""


class IllConditionedError(LambdahullError):
    """A least-squares fit has an unusable condition number."""


class DegenerateCellError(LambdahullError):
    """A spherical cell received too few quadrature nodes to average over."""


class InvalidGroupError(LambdahullError, ValueError):
    """The requested symmetry group specification is not recognised."""


class EmptyEstimateWarning(RuntimeWarning):
    """A Monte Carlo volume run scored zero hits; the estimate is vacuous."""
