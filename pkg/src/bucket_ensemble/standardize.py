"""Per-dimension z-scoring fitted on training rows only."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ConfigError
from .validation import as_float_matrix, check_fitted


class Standardizer(TransformerMixin, BaseEstimator):
    """Shift to zero mean and scale to unit deviation, one dimension at a time.

    Uses the population standard deviation (divide by N). Constant dimensions
    are mapped to exactly zero on transform and restored to their mean on
    inverse transform, so round-trips reproduce the input for them too.
    """

    def fit(self, X, y=None):
        X = as_float_matrix(X)
        if X.shape[0] < 2:
            raise ConfigError(
                f"standardizer needs at least 2 rows to fit, got {X.shape[0]}"
            )
        self.mean_ = X.mean(axis=0)
        self.scale_ = X.std(axis=0)
        self.constant_ = self.scale_ == 0.0
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "mean_")
        X = as_float_matrix(X)
        if X.shape[1] != self.mean_.shape[0]:
            raise ConfigError(
                f"expected {self.mean_.shape[0]} dimensions, got {X.shape[1]}"
            )
        safe = np.where(self.constant_, 1.0, self.scale_)
        Z = (X - self.mean_) / safe
        Z[:, self.constant_] = 0.0
        return Z

    def inverse_transform(self, Z) -> np.ndarray:
        check_fitted(self, "mean_")
        Z = as_float_matrix(Z)
        if Z.shape[1] != self.mean_.shape[0]:
            raise ConfigError(
                f"expected {self.mean_.shape[0]} dimensions, got {Z.shape[1]}"
            )
        safe = np.where(self.constant_, 0.0, self.scale_)
        return Z * safe + self.mean_


def fit_standardizer(train_rows) -> Standardizer:
    """Convenience wrapper matching the fit-then-use call sites."""
    return Standardizer().fit(train_rows)
