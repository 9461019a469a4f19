"""Nearest-neighbor classifier over rank-correlation distances."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .distances import DISTANCE_KINDS, average_ranks, rank_distance_matrix
from .errors import ConfigError
from .validation import (
    as_float_matrix,
    as_label_vector,
    check_fitted,
    check_paired,
    require_both_classes,
)


def _doubled_ranks(M: np.ndarray) -> np.ndarray:
    """Per-row average-tie ranks scaled by 2 so every entry is an integer."""
    R = np.empty_like(M)
    for i in range(M.shape[0]):
        R[i] = average_ranks(M[i])
    # average-tie ranks are half-integers, so doubling is exact
    return np.rint(2.0 * R).astype(np.int64)


def _exact_spearman_order(queries: np.ndarray, train: np.ndarray) -> np.ndarray:
    """Neighbor ordering by spearman distance in exact arithmetic.

    Ranks quantize, so distinct training rows routinely tie a query's
    rho exactly; float distances would order those ties by rounding
    noise. Integer statistics keep the promised lowest-index rule. The
    query's own variance is a shared positive factor per row, so rows
    sort by num/sqrt(dv) alone, compared via sign buckets and the exact
    rational num^2/dv.
    """
    d = queries.shape[1]
    if 4 * d**4 >= 2**62:
        # int64 would overflow past ~37k dims; object dtype stays exact
        Rq = _doubled_ranks(queries).astype(object)
        Rt = _doubled_ranks(train).astype(object)
    else:
        Rq = _doubled_ranks(queries)
        Rt = _doubled_ranks(train)
    sq = Rq.sum(axis=1)
    st = Rt.sum(axis=1)
    num = d * (Rq @ Rt.T) - np.outer(sq, st)
    du = d * (Rq * Rq).sum(axis=1) - sq * sq
    dv = d * (Rt * Rt).sum(axis=1) - st * st
    n_q, n_t = num.shape
    order = np.empty((n_q, n_t), dtype=np.intp)
    for i in range(n_q):
        if du[i] == 0:
            # constant query ranks: rho is 0 against every row
            order[i] = np.arange(n_t)
            continue
        keys = []
        for j in range(n_t):
            n_ij = int(num[i, j])
            d_j = int(dv[j])
            if d_j == 0 or n_ij == 0:
                keys.append((1, Fraction(0), j))
            elif n_ij > 0:
                keys.append((0, -Fraction(n_ij * n_ij, d_j), j))
            else:
                keys.append((2, Fraction(n_ij * n_ij, d_j), j))
        keys.sort()
        order[i] = [j for _, _, j in keys]
    return order


class RankKNNClassifier(ClassifierMixin, BaseEstimator):
    """k nearest neighbors by spearman or correlation distance.

    Ties in distance resolve toward the lowest training-row index. For
    spearman the ordering is computed in exact integer arithmetic, so
    mathematically equal distances genuinely fall back to the index rule
    instead of being ordered by float rounding noise. A tied vote
    resolves to the label of the single nearest neighbor. The reported
    score is the fraction of the k votes that agree with the returned
    decision, so it is always >= 0.5.
    """

    def __init__(self, n_neighbors: int = 3, distance: str = "spearman"):
        self.n_neighbors = n_neighbors
        self.distance = distance

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_paired(X, y)
        require_both_classes(y)
        if self.distance not in DISTANCE_KINDS:
            raise ConfigError(
                f"distance must be one of {DISTANCE_KINDS}, got {self.distance!r}"
            )
        k = int(self.n_neighbors)
        if k < 1:
            raise ConfigError(f"n_neighbors must be >= 1, got {self.n_neighbors}")
        if k > X.shape[0]:
            raise ConfigError(
                f"n_neighbors={k} exceeds the {X.shape[0]} training rows"
            )
        if X.shape[1] < 2:
            raise ConfigError("rank distances need at least 2 feature dimensions")
        self.train_rows_ = X.copy()
        self.train_labels_ = y.copy()
        self.classes_ = np.array([-1, 1])
        return self

    def _neighbor_votes(self, X) -> tuple[np.ndarray, np.ndarray]:
        check_fitted(self, "train_rows_")
        X = as_float_matrix(X)
        if X.shape[1] != self.train_rows_.shape[1]:
            raise ConfigError(
                f"query has {X.shape[1]} dims, training data has "
                f"{self.train_rows_.shape[1]}"
            )
        if self.distance == "spearman":
            order = _exact_spearman_order(X, self.train_rows_)
        else:
            D = rank_distance_matrix(X, self.train_rows_, self.distance)
            order = np.argsort(D, axis=1, kind="stable")
        k = int(self.n_neighbors)
        nearest = order[:, :k]
        votes_pos = (self.train_labels_[nearest] == 1).sum(axis=1)
        nearest_label = self.train_labels_[order[:, 0]]
        return votes_pos, nearest_label

    def predict(self, X) -> np.ndarray:
        votes_pos, nearest_label = self._neighbor_votes(X)
        k = int(self.n_neighbors)
        out = np.where(2 * votes_pos > k, 1, -1).astype(np.int64)
        tied = 2 * votes_pos == k
        out[tied] = nearest_label[tied]
        return out

    def predict_proba(self, X) -> np.ndarray:
        votes_pos, _ = self._neighbor_votes(X)
        p = votes_pos / float(self.n_neighbors)
        return np.column_stack([1.0 - p, p])
