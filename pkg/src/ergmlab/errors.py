"""
Exception hierarchy for ergmlab.

Every error raised on purpose by the library derives from LabError so the
command line front end can map it to an exit code.
"""

from typing import Any, Dict, Iterable, Optional


class LabError(Exception):
    """Base exception for ergmlab errors"""
    pass


class DomainError(LabError):
    """Raised when an argument lies outside the domain of an operation"""
    pass


class ConfigError(LabError):
    """Raised when a model file or configuration value cannot be used"""
    pass


class PreconditionError(LabError):
    """Raised when an operation is called outside its precondition"""
    pass


class NotSubcriticalError(PreconditionError):
    """Raised when a subcritical parameter vector is required but not given"""
    pass


class UnsupportedRegimeError(PreconditionError):
    """Raised when monotone coupling is requested with negative interaction terms"""
    pass


class ExactSizeError(LabError):
    """Raised when exhaustive enumeration is requested for too many vertices"""
    pass


class CoalescenceTimeoutError(LabError):
    """Raised when coupling from the past does not coalesce within its horizon"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class MissingMomentError(LabError):
    """Raised when a Hoeffding term is evaluated without the moments it needs"""

    def __init__(self, missing: Iterable[tuple]):
        self.missing = sorted(tuple(sorted(j)) for j in missing)
        super().__init__(f"Missing centered moments for subsets: {self.missing}")
