"""
Custom exceptions for valid-forecast.
"""


class ValidForecastError(Exception):
    """Base exception for all valid-forecast errors."""
    pass


class ConfigurationError(ValidForecastError):
    """Raised when there is an error in the configuration."""
    pass


class InputError(ValidForecastError):
    """Raised when input data is malformed or refers to unknown labels or data values."""
    pass


class PollDataError(InputError):
    """Raised when poll data is inconsistent or unsuitable for the requested model."""
    pass


class DomainError(ValidForecastError, ValueError):
    """Raised when a numeric argument lies outside its mathematical domain."""
    pass


class EnumerationSizeError(ValidForecastError):
    """Raised when exact enumeration of a joint model would exceed the configured limit."""
    pass


class ReportGenerationError(ValidForecastError):
    """Raised when there is an error writing a report."""
    pass
