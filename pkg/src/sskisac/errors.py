"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(ValueError):
    """Invalid experiment or antenna configuration."""


class FramingError(ValueError):
    """Bit groups or sample sequences of the wrong length."""


class AliasingError(DomainError):
    """Requested bandwidth or tone frequency cannot be represented at the sample rate."""


class EstimationError(RuntimeError):
    """A spectral or radar estimate could not be formed."""
