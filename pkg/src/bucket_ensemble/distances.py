"""Rank-correlation distances for the nearest-neighbor classifiers.

Both distances are 1 - rho, so they live in [0, 2]: 0 for perfectly
concordant vectors, 2 for perfectly discordant ones. A vector with zero
variance has no defined correlation; rho is taken as 0 there, giving the
neutral distance 1.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, DataError
from .validation import as_float_matrix, as_float_vector

DISTANCE_KINDS = ("spearman", "correlation")


def average_ranks(x) -> np.ndarray:
    """1-based ranks with ties sharing the average of their positions."""
    x = as_float_vector(x, "x")
    n = x.size
    order = np.argsort(x, kind="stable")
    sx = x[order]
    starts = np.r_[True, sx[1:] != sx[:-1]] if n else np.empty(0, dtype=bool)
    idx = np.nonzero(starts)[0]
    ends = np.r_[idx[1:], n]
    avg = (idx + ends + 1) / 2.0
    group = np.cumsum(starts) - 1
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = avg[group]
    return ranks


def _check_kind(kind: str) -> str:
    if kind not in DISTANCE_KINDS:
        raise ConfigError(f"unknown distance {kind!r}, expected one of {DISTANCE_KINDS}")
    return kind


def _normalized_rows(X: np.ndarray, kind: str) -> np.ndarray:
    """Center and unit-normalize each row; constant rows become all-zero.

    With rows prepared this way, a plain dot product yields rho, and any
    pair involving a constant row yields rho = 0 automatically.
    """
    if kind == "spearman":
        X = np.vstack([average_ranks(row) for row in X])
    centered = X - X.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.sum(centered * centered, axis=1, keepdims=True))
    safe = np.where(norms == 0.0, 1.0, norms)
    return centered / safe


def rank_distance(u, v, kind: str) -> float:
    """Distance 1 - rho between two vectors of equal dimension >= 2."""
    kind = _check_kind(kind)
    u = as_float_vector(u, "u")
    v = as_float_vector(v, "v")
    if u.size != v.size:
        raise DataError(f"vectors disagree on dimension: {u.size} vs {v.size}")
    if u.size < 2:
        raise DataError(f"rank distances need dimension >= 2, got {u.size}")
    un = _normalized_rows(u.reshape(1, -1), kind)[0]
    vn = _normalized_rows(v.reshape(1, -1), kind)[0]
    rho = float(np.clip(un @ vn, -1.0, 1.0))
    return 1.0 - rho


def rank_distance_matrix(queries, rows, kind: str) -> np.ndarray:
    """All query-to-row distances as an (n_queries, n_rows) block."""
    kind = _check_kind(kind)
    Q = as_float_matrix(queries, "queries")
    T = as_float_matrix(rows, "rows")
    if Q.shape[1] != T.shape[1]:
        raise DataError(
            f"queries and rows disagree on dimension: {Q.shape[1]} vs {T.shape[1]}"
        )
    if Q.shape[1] < 2:
        raise DataError(f"rank distances need dimension >= 2, got {Q.shape[1]}")
    rho = _normalized_rows(Q, kind) @ _normalized_rows(T, kind).T
    return 1.0 - np.clip(rho, -1.0, 1.0)
