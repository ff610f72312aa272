"""Input validation helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .exceptions import DataError, InsufficientDataError


def as_float_vector(values, name: str = "values") -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting NaN/inf and empty input."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        arr = np.atleast_1d(np.squeeze(arr))
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DataError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise DataError(f"{name} contains a non-finite value at position {bad}")
    return arr


def check_min_length(arr: np.ndarray, minimum: int, context: str) -> None:
    if arr.size < minimum:
        raise InsufficientDataError(
            f"{context}: need at least {minimum} observations, got {arr.size}"
        )


def check_positive_values(arr: np.ndarray, context: str) -> None:
    if np.any(arr <= 0.0):
        bad = int(np.flatnonzero(arr <= 0.0)[0])
        raise DataError(
            f"{context}: all values must be strictly positive "
            f"(value {arr[bad]!r} at position {bad})"
        )


def check_in_range(value: float, low: float, high: float, name: str) -> None:
    if not low < value < high:
        raise DataError(f"{name} must be in ({low}, {high}), got {value}")
