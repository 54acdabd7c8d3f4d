"""Exception types shared across the toolkit."""


class HypoineqError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(HypoineqError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class UnsupportedOperation(HypoineqError):
    """Operation not available for this group / norm combination."""


class PreconditionViolation(HypoineqError):
    """A runtime precondition (normalization, support, ...) failed."""


class DegenerateInput(HypoineqError):
    """Denominator or normalizer fell below the degeneracy threshold."""


class AccuracyError(HypoineqError):
    """Requested tolerance was not reached within the budget.

    Carries the partial estimate so callers can still inspect it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(HypoineqError):
    """Integrand returned NaN/inf; records the offending point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class RangeError(HypoineqError):
    """Argument outside the representable / convergent range."""


class DivergenceError(HypoineqError):
    """A series or integral was detected to diverge."""
