"""
Exception types raised by the in-sector estimation library.
Every error derives from InSectorError and from the builtin it refines,
so callers can catch either.
"""
from typing import Optional


class InSectorError(Exception):
    """Base class for library errors"""


class ConfigurationError(InSectorError, ValueError):
    """Invalid sector, shift-set or experiment parameters"""


class DimensionError(InSectorError, ValueError):
    """Vector or matrix dimensions do not agree"""


class ShiftIndexError(InSectorError, IndexError):
    """Circulant shift outside [0, N)"""


class SingularMaskError(InSectorError, ZeroDivisionError):
    """Spectral mask vanishes at an index that must be de-masked"""


class CalibrationError(InSectorError, ZeroDivisionError):
    """Noise level cannot be calibrated from an all-zero channel sample"""


class UndefinedMetricError(InSectorError, ValueError):
    """Metric denominator is zero"""


class TrialError(InSectorError, RuntimeError):
    """A Monte-Carlo trial failed; the run is aborted"""

    def __init__(self, trial_index: int, cause: Exception, scheme: Optional[str] = None):
        self.trial_index = trial_index
        self.cause = cause
        self.scheme = scheme
        label = f" ({scheme})" if scheme else ""
        super().__init__(f"Trial {trial_index}{label} failed: {cause}")
