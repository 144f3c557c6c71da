"""Exception types shared across the toolkit."""


class FerrylinkError(Exception):
    """Base class for all toolkit errors."""


class DistanceBelowMinimum(FerrylinkError, ValueError):
    """Distance is below the minimum safe separation of the rate table."""


class DistanceBelowReference(FerrylinkError, ValueError):
    """Distance is below the path-loss reference distance."""


class SingularMatrix(FerrylinkError, ValueError):
    """A covariance inverse failed; powers are degenerate."""


class ModeUnreachable(FerrylinkError, ValueError):
    """The top mode's spectral efficiency exceeds the whole capacity curve."""


class InfeasiblePlacement(FerrylinkError, ValueError):
    """Requested hover point violates the placement constraint box."""


class MobileRelayRequired(FerrylinkError, ValueError):
    """End-to-end distance exceeds the combined range of both links."""


class DirectLinkPossible(FerrylinkError, ValueError):
    """End-to-end distance is within a single link's range; no relay needed."""


class ConfigInvalid(FerrylinkError, ValueError):
    """Simulation or scenario parameters violate an invariant."""


class EvaluationFailed(FerrylinkError, RuntimeError):
    """Objective evaluation raised; carries the offending decision vector."""

    def __init__(self, message, individual=None):
        super().__init__(message)
        self.individual = individual


class ParseError(FerrylinkError, ValueError):
    """Scenario file is malformed or contains unknown keys."""


class ValidationError(FerrylinkError, ValueError):
    """Scenario file parsed but a value violates its constraint."""
