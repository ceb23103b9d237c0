"""Exception types raised by the solvers and stopping rules."""

__all__ = [
    "DsmError",
    "NoiseDominatesError",
    "InconsistentDataError",
    "HorizonExceededError",
    "NoSolutionError",
    "AccuracyError",
    "ConfigurationError",
]


class DsmError(Exception):
    """Base class for solver-level failures (as opposed to bad arguments)."""


class NoiseDominatesError(DsmError):
    """The data norm does not exceed c*delta.

    The discrepancy equation has no admissible root; the only defensible
    reconstruction is u = 0.
    """


class InconsistentDataError(DsmError):
    """The data component outside the operator range reaches c*delta."""


class HorizonExceededError(DsmError):
    """No stopping-time crossing exists before the search horizon."""


class NoSolutionError(DsmError):
    """The requested schedule value is never attained (it exceeds a(0))."""


class AccuracyError(DsmError):
    """Adaptive quadrature or bisection failed to reach its tolerance."""


class ConfigurationError(DsmError):
    """A schedule or solver configuration violates a method requirement."""
