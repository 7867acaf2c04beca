"""Exception types raised across the package."""


class BreakupError(Exception):
    """Base class for all package errors."""


class ParameterError(BreakupError, ValueError):
    """A physical parameter is outside its allowed domain."""


class ThresholdError(ParameterError):
    """Photon energy does not exceed the binding energy (omega + e0 <= 0)."""


class KernelRangeError(BreakupError, ValueError):
    """Argument lies outside the accuracy envelope of a numerical kernel."""


class QuadratureError(BreakupError, RuntimeError):
    """Adaptive quadrature failed to reach its error target."""


class ConfigError(BreakupError, ValueError):
    """Malformed or incomplete run configuration."""
