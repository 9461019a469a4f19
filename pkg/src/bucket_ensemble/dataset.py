"""Core data types: feature views, labeled datasets, pipeline configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .validation import as_float_matrix, as_label_vector

# Widths of the supported backbone feature layers. A feature set whose name
# ends in one of these layer names must declare the matching dimensionality.
KNOWN_LAYER_WIDTHS = {
    "fc7": 4096,
    "pool5-7x7_s1": 1024,
    "pool5": 512,
    "avg_pool": 2048,
}

_NAME_SEPARATORS = "-_/:."

TIE_BREAK_MODES = ("prefer_positive", "lowest_index")


def declared_layer_width(name: str) -> int | None:
    """Width implied by a feature-set name, or None when the name is free-form."""
    for layer in sorted(KNOWN_LAYER_WIDTHS, key=len, reverse=True):
        if name == layer:
            return KNOWN_LAYER_WIDTHS[layer]
        if name.endswith(layer) and name[-len(layer) - 1] in _NAME_SEPARATORS:
            return KNOWN_LAYER_WIDTHS[layer]
    return None


@dataclass(frozen=True)
class FeatureMatrix:
    """One feature view: a named (n_images, dims) block of real values."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        if not self.name:
            raise DataError("feature set name must be non-empty")
        arr = as_float_matrix(self.values, name=f"feature set {self.name!r}")
        if arr.shape[1] < 1:
            raise DataError(f"feature set {self.name!r} must have at least one dimension")
        object.__setattr__(self, "values", arr)
        expected = declared_layer_width(self.name)
        if expected is not None and arr.shape[1] != expected:
            raise DataError(
                f"feature set {self.name!r} names a layer of width {expected} "
                f"but carries {arr.shape[1]} dimensions"
            )

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LabeledDataset:
    """Aligned image ids, labels in {-1, +1}, and one or more feature views.

    ``augmented_sources`` maps ids of synthetically generated rows to the id
    of the original row they were derived from. The evaluation harness uses
    it to keep derived rows glued to their source's side of a split.
    """

    ids: tuple[str, ...]
    labels: np.ndarray
    views: tuple[FeatureMatrix, ...]
    name: str = ""
    augmented_sources: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        object.__setattr__(self, "ids", ids)
        if not ids:
            raise DataError("dataset has no rows")
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DataError(f"duplicate image ids: {dupes[:10]}")
        labels = as_label_vector(self.labels, name="labels")
        if labels.shape[0] != len(ids):
            raise DataError(
                f"{len(ids)} ids but {labels.shape[0]} labels"
            )
        object.__setattr__(self, "labels", labels)
        views = tuple(self.views)
        if not views:
            raise DataError("dataset must carry at least one feature view")
        for view in views:
            if view.n_rows != len(ids):
                raise DataError(
                    f"feature set {view.name!r} has {view.n_rows} rows "
                    f"for {len(ids)} images"
                )
        object.__setattr__(self, "views", views)
        id_set = set(ids)
        for child, source in self.augmented_sources.items():
            if child not in id_set:
                raise DataError(f"augmented id {child!r} is not in the dataset")
            if source not in id_set:
                raise DataError(f"augmentation source {source!r} is not in the dataset")
            if source in self.augmented_sources:
                raise DataError(
                    f"augmentation source {source!r} is itself an augmented row"
                )

    @property
    def n_images(self) -> int:
        return len(self.ids)

    @property
    def n_views(self) -> int:
        return len(self.views)

    def primary_indices(self) -> np.ndarray:
        """Indices of rows that are not augmentation outputs."""
        return np.array(
            [i for i, img in enumerate(self.ids) if img not in self.augmented_sources],
            dtype=np.int64,
        )


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for one evaluation run.

    ``classifier_configs`` of None means the default five-member bucket.
    """

    split_ratio: float = 0.8
    iterations: int = 10
    seed: int = 0
    classifier_configs: tuple | None = None
    standardize: bool = True
    tie_break: str = "prefer_positive"
    bootstrap_train: bool = True

    def __post_init__(self):
        if not (0.0 < self.split_ratio < 1.0):
            raise ConfigError(f"split_ratio must be in (0, 1), got {self.split_ratio}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigError(f"iterations must be a positive integer, got {self.iterations}")
        if self.tie_break not in TIE_BREAK_MODES:
            raise ConfigError(
                f"tie_break must be one of {TIE_BREAK_MODES}, got {self.tie_break!r}"
            )
        if self.classifier_configs is not None:
            configs = tuple(self.classifier_configs)
            if not configs:
                raise ConfigError("classifier_configs must be non-empty when given")
            object.__setattr__(self, "classifier_configs", configs)
