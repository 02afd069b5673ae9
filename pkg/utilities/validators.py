"""Validation helpers for user-supplied arrays and coefficients."""

from __future__ import annotations

import numpy as np

from core.errors import InvalidArgumentError, InvalidSpecError


def require_finite(values, what: str) -> np.ndarray:
    """Return ``values`` as a float array, rejecting NaN and infinities."""
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidSpecError(f"{what} takes non-finite values")
    return arr


def require_positive(value: float, name: str) -> float:
    if not value > 0.0:
        raise InvalidArgumentError(f"{name} must be positive, got {value!r}")
    return float(value)


def require_vanishing(values, what: str, tol: float = 1e-13) -> None:
    """Check that a nonlinearity vanishes at zero."""
    arr = require_finite(values, what)
    if arr.size and float(np.max(np.abs(arr))) > tol:
        raise InvalidSpecError(f"{what} must vanish, got {float(np.max(np.abs(arr)))!r}")
