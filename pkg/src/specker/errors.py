"""Exception types raised across the package."""


class SpeckerError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidAxis(SpeckerError):
    pass


class InvalidSharpness(SpeckerError):
    pass


class InvalidJointParams(SpeckerError):
    """Joint-POVM parameters fall outside the validity window.

    ``slacks`` maps the violated side ("lower" / "upper") to the amount by
    which the inequality fails.
    """

    def __init__(self, message, slacks=None):
        super().__init__(message)
        self.slacks = dict(slacks or {})


class MismatchedSharpness(SpeckerError):
    pass


class IncompatiblePair(SpeckerError):
    """A pair of noisy observables is not jointly measurable at this sharpness."""


class EmptyWindow(SpeckerError):
    pass


class ZeroVector(SpeckerError):
    pass


class InconsistentMarginals(SpeckerError):
    pass


class ScenarioError(SpeckerError):
    """Malformed scenario file; ``context`` names the offending key or line."""

    def __init__(self, message, context=None):
        if context:
            message = f"{context}: {message}"
        super().__init__(message)
        self.context = context
