"""Small input-validation helpers used by every estimator."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, DataError


def as_float_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-d float64 array, rejecting NaN and infinity."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DataError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def as_float_vector(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if arr.size and not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def as_label_vector(y, name: str = "y") -> np.ndarray:
    """Coerce labels to an int array over {-1, +1}."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    out = arr.astype(np.int64, copy=True)
    if arr.size and not np.array_equal(out, np.asarray(arr, dtype=np.float64)):
        raise DataError(f"{name} labels must be integers")
    bad = set(np.unique(out)) - {-1, 1}
    if bad:
        raise DataError(f"{name} labels must be -1 or +1, got {sorted(bad)}")
    return out


def check_paired(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] != y.shape[0]:
        raise DataError(
            f"row count mismatch: {X.shape[0]} feature rows vs {y.shape[0]} labels"
        )


def require_both_classes(y: np.ndarray) -> None:
    present = set(np.unique(y))
    if present != {-1, 1}:
        raise DataError(f"training labels must include both classes, got {sorted(present)}")


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise ConfigError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
