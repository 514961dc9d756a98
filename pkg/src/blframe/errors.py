"""
BL Frame - Errors

This module contains the exception hierarchy shared by the library, the
command-line front end and the JSON service.
"""


class BLFrameError(Exception):
    """Base class for every failure raised by blframe."""


class ConfigError(BLFrameError, ValueError):
    """Raised when a configuration file or override is malformed."""


class NumericalBreakdownError(BLFrameError):
    """Raised when a computation leaves its numerically safe regime."""


class DecayFitUnavailable(BLFrameError):
    """Raised when too few usable samples remain for an exponential fit."""


class UnsupportedFamilyError(BLFrameError):
    """Raised when a test function cannot supply the requested derivative."""


class GridResolutionError(BLFrameError, ValueError):
    """Raised when a sampling grid cannot resolve the requested frequency band.

    Attributes:
        required_spacing: Largest grid spacing that would resolve the band.
    """

    def __init__(self, required_spacing, spacing):
        self.required_spacing = required_spacing
        self.spacing = spacing
        super().__init__(
            f'grid spacing {spacing:.6g} is too coarse; '
            f'need spacing <= {required_spacing:.6g}'
        )


class OutOfRangeError(BLFrameError, ValueError):
    """Raised when (s, p, q) lies outside an admissible parameter range.

    Attributes:
        interval: Admissible smoothness interval as a (lo, hi) tuple, or None
            when the integrability parameters already rule the case out.
        reason: Short human-readable explanation.
    """

    def __init__(self, reason, interval=None):
        self.reason = reason
        self.interval = interval
        message = reason
        if interval is not None:
            message = f'{reason}; admissible s-interval {format_interval(interval)}'
        super().__init__(message)


class ConditioningWarning(UserWarning):
    """Emitted when a least-squares system had to be regularised."""


def format_interval(interval):
    """Format an open interval the way reports and error messages quote it.

    Args:
        interval: A (lo, hi) pair of floats.

    Returns:
        str: The interval as '(lo, hi)' using the shortest float form.
    """
    lo, hi = interval
    return f'({lo + 0.0:g}, {hi + 0.0:g})'
