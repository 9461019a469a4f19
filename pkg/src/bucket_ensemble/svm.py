"""Support vector machine trained by sequential minimal optimization.

The dual problem

    max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
    s.t. 0 <= alpha_i <= C,  sum_i alpha_i y_i = 0

is solved two coordinates at a time. The working pair is the maximal
violating pair: with r_i = y_i - u_i (u_i the bias-free margin), pick the
worst offender i among the points allowed to grow along +y_i and the worst
offender j among those allowed to grow along -y_j, then move the pair by
the analytic step, clipped to the box. Pairwise updates keep the equality
constraint satisfied to rounding error without ever projecting.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .calibration import SigmoidCalibrator
from .errors import ConfigError
from .kernels import kernel_matrix, resolve_kernel_scale
from .validation import (
    as_float_matrix,
    as_label_vector,
    check_fitted,
    check_paired,
    require_both_classes,
)

# Alphas this close to a box bound are snapped onto it, so the working-set
# masks never admit a pair with microscopic room to move.
_SNAP = 1e-12


class SMOSVMClassifier(ClassifierMixin, BaseEstimator):
    """Binary kernel SVM with labels in {-1, +1}.

    Parameters
    ----------
    kernel : str
        "polynomial", "gaussian", or "rbf" (alias of gaussian).
    kernel_scale : "auto" or float
        Positive length scale s. "auto" uses the median pairwise distance
        of the training rows.
    degree : int
        Polynomial degree; ignored by the gaussian kernel.
    C : float
        Box constraint on the dual coefficients.
    tol : float
        Convergence threshold on the maximal KKT violation.
    max_iter : int
        Hard cap on pair updates; hitting it is reported on the instance
        and through a warning, never silently.
    scale_seed : int
        Seed for the subsample drawn by the "auto" scale heuristic.
    """

    def __init__(
        self,
        kernel: str = "gaussian",
        kernel_scale="auto",
        degree: int = 3,
        C: float = 1.0,
        tol: float = 1e-3,
        max_iter: int = 10000,
        scale_seed: int = 0,
    ):
        self.kernel = kernel
        self.kernel_scale = kernel_scale
        self.degree = degree
        self.C = C
        self.tol = tol
        self.max_iter = max_iter
        self.scale_seed = scale_seed

    def _resolved_scale(self, X: np.ndarray) -> float:
        if isinstance(self.kernel_scale, str):
            if self.kernel_scale != "auto":
                raise ConfigError(
                    f"kernel_scale must be 'auto' or a positive real, got {self.kernel_scale!r}"
                )
            return resolve_kernel_scale(X, seed=self.scale_seed)
        return float(self.kernel_scale)

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_paired(X, y)
        require_both_classes(y)
        C = float(self.C)
        if not (C > 0.0):
            raise ConfigError(f"C must be positive, got {self.C}")
        if not (float(self.tol) > 0.0):
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")

        scale = self._resolved_scale(X)
        K = kernel_matrix(X, X, self.kernel, scale, self.degree)
        n = X.shape[0]
        yf = y.astype(np.float64)
        alpha = np.zeros(n)
        u = np.zeros(n)  # bias-free margins sum_a alpha_a y_a K_a.
        pos = y == 1

        n_iter = 0
        for n_iter in range(1, int(self.max_iter) + 1):
            r = yf - u
            can_grow = alpha < C
            can_shrink = alpha > 0.0
            up = (pos & can_grow) | (~pos & can_shrink)
            low = (~pos & can_grow) | (pos & can_shrink)
            if not up.any() or not low.any():
                break
            i = int(np.where(up, r, -np.inf).argmax())
            j = int(np.where(low, r, np.inf).argmin())
            gap = r[i] - r[j]
            if gap <= self.tol:
                break
            eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
            step = gap / eta
            cap_i = C - alpha[i] if pos[i] else alpha[i]
            cap_j = alpha[j] if pos[j] else C - alpha[j]
            step = min(step, cap_i, cap_j)
            if step <= 0.0:
                break
            old_i, old_j = alpha[i], alpha[j]
            alpha[i] = old_i + yf[i] * step
            alpha[j] = old_j - yf[j] * step
            for k in (i, j):
                if alpha[k] < _SNAP:
                    alpha[k] = 0.0
                elif alpha[k] > C - _SNAP:
                    alpha[k] = C
            u += (yf[i] * (alpha[i] - old_i)) * K[i] + (yf[j] * (alpha[j] - old_j)) * K[j]

        r = yf - u
        up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0.0))
        free = (alpha > 0.0) & (alpha < C)
        if free.any():
            bias = float(r[free].mean())
        elif up.any() and low.any():
            bias = float((np.max(r[up]) + np.min(r[low])) / 2.0)
        else:
            bias = 0.0
        residual = 0.0
        if up.any() and low.any():
            residual = max(0.0, float(np.max(r[up]) - np.min(r[low])))

        self.kernel_scale_ = scale
        self.alpha_ = alpha
        self.bias_ = bias
        self.n_iter_ = n_iter
        self.kkt_residual_ = residual
        self.converged_ = residual <= self.tol
        if not self.converged_:
            warnings.warn(
                f"SMO stopped after {n_iter} iterations with KKT violation "
                f"{residual:.3e} > tol {self.tol:.3e}",
                stacklevel=2,
            )
        support = alpha > 0.0
        self.support_vectors_ = X[support].copy()
        self.dual_coef_ = (alpha * yf)[support]
        self.classes_ = np.array([-1, 1])
        margins = u + bias
        self.calibrator_ = SigmoidCalibrator().fit(margins, y)
        return self

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "alpha_")
        X = as_float_matrix(X)
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self.bias_)
        K = kernel_matrix(
            X, self.support_vectors_, self.kernel, self.kernel_scale_, self.degree
        )
        return K @ self.dual_coef_ + self.bias_

    def predict_proba(self, X) -> np.ndarray:
        check_fitted(self, "alpha_")
        p = self.calibrator_.positive_probability(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "alpha_")
        z = self.calibrator_.log_odds(self.decision_function(X))
        # log-odds exactly 0 is a posterior tie; it resolves positive.
        return np.where(z >= 0.0, 1, -1).astype(np.int64)
