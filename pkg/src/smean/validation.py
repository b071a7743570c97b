"""Input validation shared by the estimators."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils.validation import check_array

__all__ = ["check_semi_axes", "check_positive_int", "check_bump_array", "check_mean_array"]


def check_semi_axes(semi_axes) -> tuple[float, ...]:
    axes = np.asarray(semi_axes, dtype=float)
    if axes.ndim != 1 or axes.size < 2:
        raise ValueError(f"semi_axes must be a 1-D sequence of length >= 2, got {semi_axes!r}")
    if not np.all(np.isfinite(axes)) or np.any(axes <= 0):
        raise ValueError("semi_axes must be finite and positive")
    return tuple(float(a) for a in axes)


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_bump_array(X, n: int) -> np.ndarray:
    """Rows ``(c_1, ..., c_n, radius[, amplitude])`` describing single-bump phantoms."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] not in (n + 1, n + 2):
        raise ValueError(f"expected {n + 1} or {n + 2} columns (centre, radius[, amplitude]), "
                         f"got {X.shape[1]}")
    if np.any(X[:, n] <= 0):
        raise ValueError("bump radii must be positive")
    if X.shape[1] == n + 1:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    return X


def check_mean_array(X, n_directions: int, n_radii: int) -> np.ndarray:
    """Flattened mean samples, shape ``(n_samples, n_directions * n_radii)``."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    expected = n_directions * n_radii
    if X.shape[1] != expected:
        raise ValueError(f"expected {expected} features ({n_directions} directions x "
                         f"{n_radii} radii), got {X.shape[1]}")
    return X
