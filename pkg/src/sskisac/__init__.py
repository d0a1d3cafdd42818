"""SSK-modulated integrated sensing and communication link simulator for LEO satellites."""

from .errors import (
    AliasingError,
    ConfigError,
    DomainError,
    EstimationError,
    FramingError,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "ConfigError",
    "DomainError",
    "EstimationError",
    "FramingError",
    "__version__",
]
