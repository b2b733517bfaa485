"""Exception hierarchy shared by every module of the package."""


class GrowthPMPError(Exception):
    """Base class for all errors raised by growthpmp."""


class InvalidInput(GrowthPMPError, ValueError):
    """Non-finite, malformed or otherwise unusable input."""


class InvalidParams(InvalidInput):
    """Problem parameters violate a > lambda > 0, T > t0 >= 0 or x0 <= 1 (FP2)."""


class InvalidKind(InvalidInput):
    """An operation was asked to handle the wrong problem kind or case."""


class DomainMismatch(InvalidInput):
    """Time grid or evaluation time does not match the problem horizon."""


class ConfigurationError(InvalidInput):
    """Oracle configuration cannot represent the problem (e.g. grid too small)."""
