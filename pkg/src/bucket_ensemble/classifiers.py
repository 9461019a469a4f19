"""Classifier bucket: declarative configs and the factory that builds them.

A ClassifierConfig is the serializable description of one bucket member;
build_classifier turns it into a scikit-learn style estimator. The default
bucket holds five members: a polynomial-kernel SVM, a gaussian-kernel SVM,
a kernel logistic model, and two rank-distance nearest-neighbor voters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .kernel_logistic import KernelLogisticClassifier
from .kernels import KERNEL_KINDS
from .knn import RankKNNClassifier
from .distances import DISTANCE_KINDS
from .svm import SMOSVMClassifier

CLASSIFIER_KINDS = ("svm", "llp", "knn")


@dataclass(frozen=True)
class ClassifierConfig:
    """Description of one bucket member; exactly the fields that matter
    for ``kind`` may be set, everything else must stay None."""

    kind: str
    kernel: str | None = None
    kernel_scale: float | str | None = None
    degree: int | None = None
    regularization: float | None = None
    max_iter: int | None = None
    init: float | None = None
    neighbors: int | None = None
    distance: str | None = None

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ConfigError(
                f"kind must be one of {CLASSIFIER_KINDS}, got {self.kind!r}"
            )
        if self.kind == "knn":
            self._validate_knn()
        else:
            self._validate_kernel_model()

    def _forbid(self, *fields: str) -> None:
        for name in fields:
            if getattr(self, name) is not None:
                raise ConfigError(f"field {name!r} does not apply to kind {self.kind!r}")

    def _validate_knn(self):
        self._forbid("kernel", "kernel_scale", "degree", "regularization", "max_iter", "init")
        if self.neighbors is None or int(self.neighbors) < 1:
            raise ConfigError(f"knn needs neighbors >= 1, got {self.neighbors}")
        if self.distance not in DISTANCE_KINDS:
            raise ConfigError(
                f"knn distance must be one of {DISTANCE_KINDS}, got {self.distance!r}"
            )

    def _validate_kernel_model(self):
        self._forbid("neighbors", "distance")
        if self.kind == "svm":
            self._forbid("regularization", "max_iter", "init")
            if self.kernel is None:
                raise ConfigError("svm needs an explicit kernel")
        else:
            object.__setattr__(self, "kernel", self.kernel or "rbf")
        if self.kernel not in KERNEL_KINDS:
            raise ConfigError(
                f"kernel must be one of {KERNEL_KINDS}, got {self.kernel!r}"
            )
        if self.kernel_scale is None:
            object.__setattr__(self, "kernel_scale", "auto")
        elif not (self.kernel_scale == "auto" or (
            isinstance(self.kernel_scale, (int, float)) and float(self.kernel_scale) > 0.0
        )):
            raise ConfigError(
                f"kernel_scale must be 'auto' or a positive real, got {self.kernel_scale!r}"
            )
        if self.kernel == "polynomial":
            object.__setattr__(self, "degree", 3 if self.degree is None else int(self.degree))
            if self.degree < 1:
                raise ConfigError(f"degree must be >= 1, got {self.degree}")
        elif self.degree is not None:
            raise ConfigError("degree only applies to the polynomial kernel")
        if self.kind == "llp":
            object.__setattr__(
                self, "regularization",
                1.0 if self.regularization is None else float(self.regularization),
            )
            if self.regularization < 0.0:
                raise ConfigError(f"regularization must be >= 0, got {self.regularization}")
            object.__setattr__(
                self, "max_iter", 1000 if self.max_iter is None else int(self.max_iter)
            )
            if self.max_iter < 1:
                raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
            object.__setattr__(self, "init", 0.0 if self.init is None else float(self.init))

    def label(self) -> str:
        """Short human-readable tag used in reports and error messages."""
        if self.kind == "knn":
            return f"knn-{self.neighbors}-{self.distance}"
        if self.kind == "svm":
            return f"svm-{self.kernel}"
        return f"llp-{self.kernel}"


def default_bucket() -> tuple[ClassifierConfig, ...]:
    """The standard five-member bucket."""
    return (
        ClassifierConfig("svm", kernel="polynomial"),
        ClassifierConfig("svm", kernel="gaussian"),
        ClassifierConfig("llp"),
        ClassifierConfig("knn", neighbors=3, distance="spearman"),
        ClassifierConfig("knn", neighbors=4, distance="correlation"),
    )


def build_classifier(config: ClassifierConfig, scale_seed: int = 0):
    if config.kind == "svm":
        return SMOSVMClassifier(
            kernel=config.kernel,
            kernel_scale=config.kernel_scale,
            degree=config.degree if config.degree is not None else 3,
            scale_seed=scale_seed,
        )
    if config.kind == "llp":
        return KernelLogisticClassifier(
            kernel=config.kernel,
            kernel_scale=config.kernel_scale,
            regularization=config.regularization,
            init=config.init,
            max_iter=config.max_iter,
            degree=config.degree if config.degree is not None else 3,
            scale_seed=scale_seed,
        )
    return RankKNNClassifier(n_neighbors=config.neighbors, distance=config.distance)


def train(config: ClassifierConfig, X, y, scale_seed: int = 0):
    """Build and fit one bucket member."""
    return build_classifier(config, scale_seed=scale_seed).fit(X, y)


@dataclass(frozen=True)
class Prediction:
    """A decision in {-1, +1} and the posterior score of that decision."""

    decision: int
    score: float

    def __post_init__(self):
        if self.decision not in (-1, 1):
            raise ValueError(f"decision must be -1 or +1, got {self.decision!r}")
        if not (0.5 - 1e-9 <= self.score <= 1.0 + 1e-9):
            raise ValueError(
                f"score of the predicted class must lie in [0.5, 1], got {self.score!r}"
            )


def predict_batch(model, X) -> tuple[np.ndarray, np.ndarray]:
    """Decisions and predicted-class scores for a block of rows."""
    decisions = model.predict(X)
    proba = model.predict_proba(X)
    cols = (decisions == 1).astype(np.int64)
    scores = np.take_along_axis(proba, cols[:, None], axis=1).ravel()
    return decisions, scores


def predict_one(model, row) -> Prediction:
    decisions, scores = predict_batch(model, np.atleast_2d(row))
    return Prediction(int(decisions[0]), float(scores[0]))
