"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """Raised when an operation receives values outside its contract."""


class ConfigError(Exception):
    """Raised for invalid case configuration (bad keys, values, files)."""


class DegenerateGradientError(Exception):
    """Raised when a volume-fraction gradient is too small to orient an interface.

    Carries the offending cell index when known.
    """

    def __init__(self, message: str, cell=None):
        super().__init__(message)
        self.cell = cell


class TimeStepError(Exception):
    """Raised when a sweep violates its per-sweep CFL restriction."""


class DiagnosticsError(Exception):
    """Raised by post-processing when requested data is unavailable."""
