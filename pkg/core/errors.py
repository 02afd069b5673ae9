"""Exception hierarchy shared by every globlin package."""

from typing import Any, Optional


class GloblinError(Exception):
    """Base class for all solver errors."""


class InvalidStateError(GloblinError):
    """A state vector holds non-finite values."""


class DimensionError(GloblinError):
    """Vector length or mesh does not match the operator."""


class SingularOperatorError(GloblinError):
    """A linear solve failed; ``residual`` is the best residual reached (``inf`` if none)."""

    def __init__(self, message: str, residual: float = float("inf")):
        super().__init__(message)
        self.residual = residual


class UnsupportedOperationError(GloblinError):
    """The problem family or operator does not provide the requested capability."""


class InvalidArgumentError(GloblinError, ValueError):
    """An argument lies outside its documented range."""


class InvalidSpecError(GloblinError, ValueError):
    """A problem specification violates its declared hypotheses."""


class InsufficientDataError(GloblinError):
    """Too few iterations were recorded for the requested diagnostic."""


class NonConvergenceError(GloblinError):
    """A run that had to converge did not."""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class ConfigError(GloblinError):
    """Run configuration is malformed."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key
