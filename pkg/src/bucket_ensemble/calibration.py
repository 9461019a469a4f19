"""Sigmoid calibration mapping raw classifier margins to posterior scores."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .validation import as_float_vector, as_label_vector, check_fitted, check_paired

_MAX_NEWTON_STEPS = 100
_GRAD_TOL = 1e-8
_RIDGE = 1e-12


def stable_sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log1pexp(z: np.ndarray) -> np.ndarray:
    # log(1 + e^z) without overflow on either tail.
    out = np.empty_like(z)
    hi = z > 30.0
    out[hi] = z[hi]
    out[~hi] = np.log1p(np.exp(z[~hi]))
    return out


class SigmoidCalibrator(BaseEstimator):
    """Two-parameter logistic fit p(+1 | f) = sigmoid(slope * f + offset).

    Fitted on training margins by damped Newton iteration against the
    usual smoothed targets (N+ + 1) / (N+ + 2) and 1 / (N- + 2), which
    keep the likelihood bounded even when the margins separate the
    classes perfectly. A fit that still degenerates (non-finite
    parameters) falls back to the identity mapping slope 1, offset 0; a
    fit whose slope comes back negative is replaced by the uninformative
    constant 0.5. Either way calibrated scores are monotone in the margin.
    """

    def fit(self, margins, labels):
        f = as_float_vector(margins, "margins")
        y = as_label_vector(labels, "labels")
        check_paired(f.reshape(-1, 1), y)
        n_pos = int(np.sum(y == 1))
        n_neg = int(np.sum(y == -1))
        if n_pos == 0 or n_neg == 0:
            self.slope_, self.offset_ = 1.0, 0.0
            return self

        hi = (n_pos + 1.0) / (n_pos + 2.0)
        lo = 1.0 / (n_neg + 2.0)
        t = np.where(y == 1, hi, lo)

        def objective(a: float, b: float) -> float:
            z = a * f + b
            return float(np.sum(_log1pexp(z) - t * z))

        a, b = 0.0, 0.0
        value = objective(a, b)
        for _ in range(_MAX_NEWTON_STEPS):
            p = stable_sigmoid(a * f + b)
            residual = p - t
            g1 = float(np.dot(residual, f))
            g2 = float(residual.sum())
            if max(abs(g1), abs(g2)) <= _GRAD_TOL:
                break
            w = p * (1.0 - p)
            h11 = float(np.dot(w, f * f)) + _RIDGE
            h12 = float(np.dot(w, f))
            h22 = float(w.sum()) + _RIDGE
            det = h11 * h22 - h12 * h12
            if det <= 0.0 or not np.isfinite(det):
                break
            da = -(h22 * g1 - h12 * g2) / det
            db = -(h11 * g2 - h12 * g1) / det
            # Backtracking keeps every accepted step a strict improvement.
            step = 1.0
            improved = False
            for _ in range(30):
                trial = objective(a + step * da, b + step * db)
                if trial < value - 1e-12 * abs(value):
                    a, b = a + step * da, b + step * db
                    value = trial
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break

        if not (np.isfinite(a) and np.isfinite(b)):
            a, b = 1.0, 0.0
        elif a < 0.0:
            a, b = 0.0, 0.0
        self.slope_, self.offset_ = float(a), float(b)
        return self

    def log_odds(self, margins) -> np.ndarray:
        check_fitted(self, "slope_")
        f = as_float_vector(margins, "margins")
        return self.slope_ * f + self.offset_

    def positive_probability(self, margins) -> np.ndarray:
        return stable_sigmoid(self.log_odds(margins))
