"""Exception hierarchy for shockcast.

Every exception raised by the package derives from :class:`ShockcastError`,
so callers can catch one base type. Subclasses also inherit the closest
builtin (ValueError/RuntimeError/OSError) so generic handling keeps working.
"""

from __future__ import annotations


class ShockcastError(Exception):
    """Base class for all shockcast errors."""


class SeriesLengthError(ShockcastError, ValueError):
    """Series too short for the requested operation."""


class LogDomainError(ShockcastError, ValueError):
    """Non-positive level value encountered where a log is required."""


class InitialValuesError(ShockcastError, ValueError):
    """Wrong number of initial values supplied to integration."""


class ParameterConstraintError(ShockcastError, ValueError):
    """Coefficients violate stationarity/invertibility, or sigma2 <= 0."""


class FilterInstabilityError(ShockcastError, ArithmeticError):
    """Non-finite quantity produced during Kalman filtering."""


class ConvergenceError(ShockcastError, RuntimeError):
    """Optimizer failed to converge; carries best-so-far diagnostics."""

    def __init__(self, message: str, best_point=None, best_objective=None):
        super().__init__(message)
        self.best_point = best_point
        self.best_objective = best_objective


class SearchError(ShockcastError, RuntimeError):
    """Every candidate in an order search failed; carries the trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class PanelAlignmentError(ShockcastError, ValueError):
    """Sector sets or quarter windows do not line up."""


class ForecastWindowError(ShockcastError, ValueError):
    """Requested horizon exceeds the available actuals."""


class QuarterGapError(ShockcastError, ValueError):
    """A quarter is missing from an otherwise contiguous panel."""


class CsvParseError(ShockcastError, ValueError):
    """Malformed cell or label in a panel CSV; message carries row/column."""


class CsvSchemaError(ShockcastError, ValueError):
    """Structural problem with a panel CSV (duplicate/missing columns)."""


class BeaAuthError(ShockcastError, ValueError):
    """BEA API key missing or rejected."""


class BeaRetrievalError(ShockcastError, OSError):
    """Transport-level failure talking to the BEA API."""


class BeaMappingError(ShockcastError, ValueError):
    """BEA response does not match the configured sector mapping."""
