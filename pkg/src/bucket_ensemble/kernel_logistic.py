"""Kernel logistic regression fit by plain gradient descent.

The decision function is f(x) = sum_i w_i k(x, x_i) over the training
rows, with the squared-norm penalty taken in the same kernel space:

    J(w) = mean_i log(1 + exp(-y_i f_i)) + (reg / 2) w' K w

J is smooth and convex, so a constant step of 1 / L with L an upper bound
on the Hessian spectrum descends monotonically; L comes from the largest
eigenvalue of K. No intercept is carried: the downstream sigmoid
calibration supplies the offset.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .calibration import SigmoidCalibrator, stable_sigmoid
from .errors import ConfigError
from .kernels import kernel_matrix, resolve_kernel_scale
from .validation import (
    as_float_matrix,
    as_label_vector,
    check_fitted,
    check_paired,
    require_both_classes,
)


def logistic_gradient(K: np.ndarray, y: np.ndarray, w: np.ndarray, regularization: float) -> np.ndarray:
    """Gradient of J at w. At w = 0 this is -(K @ y) / (2 n)."""
    f = K @ w
    slack = -y * stable_sigmoid(-y * f)
    return K @ (slack / y.size + regularization * w)


class KernelLogisticClassifier(ClassifierMixin, BaseEstimator):
    def __init__(
        self,
        kernel: str = "rbf",
        kernel_scale="auto",
        regularization: float = 1.0,
        init: float = 0.0,
        max_iter: int = 1000,
        grad_tol: float = 1e-6,
        degree: int = 3,
        scale_seed: int = 0,
    ):
        self.kernel = kernel
        self.kernel_scale = kernel_scale
        self.regularization = regularization
        self.init = init
        self.max_iter = max_iter
        self.grad_tol = grad_tol
        self.degree = degree
        self.scale_seed = scale_seed

    def fit(self, X, y):
        X = as_float_matrix(X)
        labels = as_label_vector(y)
        check_paired(X, labels)
        require_both_classes(labels)
        reg = float(self.regularization)
        if reg < 0.0:
            raise ConfigError(f"regularization must be >= 0, got {self.regularization}")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")

        if isinstance(self.kernel_scale, str):
            if self.kernel_scale != "auto":
                raise ConfigError(
                    f"kernel_scale must be 'auto' or a positive real, got {self.kernel_scale!r}"
                )
            scale = resolve_kernel_scale(X, seed=self.scale_seed)
        else:
            scale = float(self.kernel_scale)

        n = X.shape[0]
        K = kernel_matrix(X, X, self.kernel, scale, self.degree)
        yf = labels.astype(np.float64)
        w = np.full(n, float(self.init))

        top = float(np.linalg.eigvalsh(K)[-1])
        lipschitz = top * top / (4.0 * n) + reg * top
        step = 1.0 / max(lipschitz, 1e-12)

        grad = logistic_gradient(K, yf, w, reg)
        n_iter = 0
        for n_iter in range(1, int(self.max_iter) + 1):
            norm = float(np.linalg.norm(grad))
            if norm <= self.grad_tol:
                break
            w = w - step * grad
            grad = logistic_gradient(K, yf, w, reg)

        self.kernel_scale_ = scale
        self.weights_ = w
        self.grad_norm_ = float(np.linalg.norm(grad))
        self.converged_ = self.grad_norm_ <= self.grad_tol
        self.n_iter_ = n_iter
        self.train_rows_ = X.copy()
        self.classes_ = np.array([-1, 1])
        self.calibrator_ = SigmoidCalibrator().fit(K @ w, labels)
        return self

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "weights_")
        X = as_float_matrix(X)
        K = kernel_matrix(X, self.train_rows_, self.kernel, self.kernel_scale_, self.degree)
        return K @ self.weights_

    def predict_proba(self, X) -> np.ndarray:
        check_fitted(self, "weights_")
        p = self.calibrator_.positive_probability(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "weights_")
        z = self.calibrator_.log_odds(self.decision_function(X))
        return np.where(z >= 0.0, 1, -1).astype(np.int64)
