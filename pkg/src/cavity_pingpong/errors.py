"""Exception types shared across the package."""


class CavityError(Exception):
    """Base class for all package errors."""


class SingularRatesError(CavityError, ZeroDivisionError):
    """A complex rate (or a product of decay rates) vanished where it divides."""


class SingularStateError(CavityError):
    """A semiclassical state hit the pole of the bounced family."""

    def __init__(self, message, variant=None, distance=None):
        super().__init__(message)
        self.variant = variant
        self.distance = distance


class ConvergenceError(CavityError):
    """Fock-space truncation did not converge below the cutoff cap."""

    def __init__(self, message, trajectory=()):
        super().__init__(message)
        self.trajectory = list(trajectory)


class IllConditionedError(CavityError):
    """A linear solve left a residual above tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CalibrationError(CavityError):
    """The friction sign calibration was ambiguous."""


class ConfigError(CavityError, ValueError):
    """Malformed configuration file or option."""


class PresetNotFoundError(ConfigError, KeyError):
    """Unknown preset name."""

    def __str__(self):
        return Exception.__str__(self)


class MissingColumnError(CavityError, KeyError):
    """A requested column is absent from a scan result."""

    def __str__(self):
        return Exception.__str__(self)
