"""Kernel functions and the data-driven kernel-scale heuristic."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .rng import seeded_rng
from .validation import as_float_matrix

KERNEL_KINDS = ("polynomial", "gaussian", "rbf")

# Rows examined by the scale heuristic are capped so the distance matrix
# stays small on big datasets; the subsample is drawn from a seeded stream.
_SCALE_SAMPLE_CAP = 256


def _check_kind(kind: str) -> str:
    if kind not in KERNEL_KINDS:
        raise ConfigError(f"unknown kernel {kind!r}, expected one of {KERNEL_KINDS}")
    return kind


def _check_scale(scale: float) -> float:
    s = float(scale)
    if not np.isfinite(s) or s <= 0.0:
        raise ConfigError(f"kernel scale must be a positive real, got {scale!r}")
    return s


def squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, clipped at zero for stability."""
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    d2 = aa + bb - 2.0 * (A @ B.T)
    return np.maximum(d2, 0.0)


def kernel_matrix(A, B, kind: str, scale: float, degree: int = 3) -> np.ndarray:
    """Gram block K[i, j] = k(A_i, B_j).

    polynomial: (1 + <u, v> / s^2) ** degree
    gaussian (alias rbf): exp(-||u - v||^2 / (2 s^2))
    """
    kind = _check_kind(kind)
    s = _check_scale(scale)
    A = as_float_matrix(A, "A")
    B = as_float_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise ConfigError(
            f"kernel operands disagree on dimensionality: {A.shape[1]} vs {B.shape[1]}"
        )
    if kind == "polynomial":
        if int(degree) != degree or degree < 1:
            raise ConfigError(f"polynomial degree must be a positive integer, got {degree}")
        return (1.0 + (A @ B.T) / (s * s)) ** int(degree)
    return np.exp(-squared_distances(A, B) / (2.0 * s * s))


def kernel_value(u, v, kind: str, scale: float, degree: int = 3) -> float:
    u = np.atleast_2d(np.asarray(u, dtype=np.float64))
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    return float(kernel_matrix(u, v, kind, scale, degree)[0, 0])


def resolve_kernel_scale(train_rows, seed: int = 0) -> float:
    """Median pairwise Euclidean distance over (a subsample of) the rows.

    Always strictly positive: degenerate inputs whose median distance is
    zero fall back to 1.0 so downstream kernels stay well defined.
    """
    X = as_float_matrix(train_rows, "train_rows")
    n = X.shape[0]
    if n < 2:
        raise ConfigError(f"kernel scale heuristic needs at least 2 rows, got {n}")
    if n > _SCALE_SAMPLE_CAP:
        rng = seeded_rng(seed, "kernel-scale")
        keep = np.sort(rng.choice(n, size=_SCALE_SAMPLE_CAP, replace=False))
        X = X[keep]
    d2 = squared_distances(X, X)
    iu = np.triu_indices(X.shape[0], k=1)
    median = float(np.median(np.sqrt(d2[iu])))
    return median if median > 0.0 else 1.0
