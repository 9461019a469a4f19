"""Evaluation protocol: stratified splits, per-iteration runs, aggregation.

Every random draw comes from a stream tagged with the iteration number, so
a report is a pure function of (dataset, config). Iterations are
independent and may be computed on worker threads; results are assembled
by iteration index, which keeps reports bit-identical whatever the worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classifiers import default_bucket, predict_batch, train
from .dataset import LabeledDataset, PipelineConfig
from .ensemble import DecisionRecord, FusionOutcome, fuse
from .errors import ConfigError, DataError
from .metrics import Confusion, MetricSet, compute_metrics
from .rng import seeded_rng, spawn_seed
from .standardize import Standardizer
from .validation import as_label_vector


@dataclass(frozen=True)
class SplitPlan:
    iteration: int
    train_indices: tuple
    test_indices: tuple
    bootstrap_indices: tuple | None = None


@dataclass(frozen=True)
class IterationResult:
    iteration: int
    plan: SplitPlan
    train_multiset: tuple  # rows actually trained on, augmentation included
    image_ids: tuple
    true_labels: tuple
    records: tuple  # one DecisionRecord per test image
    outcomes: tuple  # one FusionOutcome per test image
    confusion: Confusion
    metrics: MetricSet


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    config: PipelineConfig
    iterations: tuple
    aggregate_confusion: Confusion
    aggregate_metrics: MetricSet


def _train_share(ratio: float, count: int) -> int:
    return int(math.floor(ratio * count + 0.5))


def make_splits(labels, config: PipelineConfig) -> list[SplitPlan]:
    """Stratified train/test index plans for every iteration.

    The train size is round(split_ratio * n); each class contributes its
    proportional share, apportioned by largest remainder so per-class
    counts sit within one image of the exact proportion. When bootstrap
    is enabled each plan also carries a with-replacement resample of its
    train rows, the same size as the train set.
    """
    y = as_label_vector(labels, "labels")
    n = y.shape[0]
    if n < 5:
        raise DataError(f"need at least 5 images to split, got {n}")
    class_indices = {c: np.flatnonzero(y == c) for c in (-1, 1)}
    for c, idx in class_indices.items():
        if idx.size < 2:
            raise DataError(f"class {c:+d} has {idx.size} images; need at least 2")

    n_train = _train_share(config.split_ratio, n)
    if n_train < 2 or n_train >= n:
        raise ConfigError(
            f"split_ratio {config.split_ratio} leaves train={n_train} of {n} rows"
        )

    # Largest-remainder apportionment of the train budget across classes.
    exact = {c: config.split_ratio * idx.size for c, idx in class_indices.items()}
    share = {c: int(math.floor(v)) for c, v in exact.items()}
    leftover = n_train - sum(share.values())
    order = sorted(class_indices, key=lambda c: (share[c] - exact[c], c))
    for c in order[:leftover]:
        share[c] += 1
    for c, idx in class_indices.items():
        if share[c] < 1:
            raise ConfigError(
                f"split_ratio {config.split_ratio} leaves class {c:+d} out of training"
            )
        if share[c] > idx.size:
            share[c] = idx.size

    plans = []
    for i in range(config.iterations):
        rng = seeded_rng(config.seed, f"split/{i}")
        train_idx: list[int] = []
        for c in (-1, 1):
            perm = class_indices[c][rng.permutation(class_indices[c].size)]
            train_idx.extend(int(v) for v in perm[: share[c]])
        train_set = sorted(train_idx)
        test_set = sorted(set(range(n)) - set(train_set))
        if not test_set:
            raise ConfigError("split leaves no test rows")
        bootstrap = None
        if config.bootstrap_train:
            draw_rng = seeded_rng(config.seed, f"bootstrap/{i}")
            draws = draw_rng.integers(0, len(train_set), size=len(train_set))
            bootstrap = tuple(train_set[int(d)] for d in draws)
        plans.append(
            SplitPlan(
                iteration=i,
                train_indices=tuple(train_set),
                test_indices=tuple(test_set),
                bootstrap_indices=bootstrap,
            )
        )
    return plans


def _attach_augmented(dataset: LabeledDataset, train_set: set) -> list:
    """Indices of augmented rows whose source landed in the train side."""
    if not dataset.augmented_sources:
        return []
    id_to_index = {img: i for i, img in enumerate(dataset.ids)}
    train_ids = {dataset.ids[i] for i in train_set}
    extras = [
        id_to_index[child]
        for child, source in dataset.augmented_sources.items()
        if source in train_ids
    ]
    return sorted(extras)


def run_iteration(plan: SplitPlan, dataset: LabeledDataset,
                  config: PipelineConfig) -> IterationResult:
    """Train the full grid on one split and fuse every test image."""
    configs = config.classifier_configs or default_bucket()
    base_train = list(plan.bootstrap_indices or plan.train_indices)
    extras = _attach_augmented(dataset, set(plan.train_indices))
    train_rows = base_train + extras
    test_rows = list(plan.test_indices)
    overlap = set(train_rows) & set(test_rows)
    if overlap:
        raise DataError(f"train and test share rows: {sorted(overlap)[:10]}")

    y_train = dataset.labels[train_rows]
    y_test = dataset.labels[test_rows]

    view_train = []
    view_test = []
    for view in dataset.views:
        X_tr = view.values[train_rows]
        X_te = view.values[test_rows]
        if config.standardize:
            scaler = Standardizer().fit(X_tr)
            X_tr = scaler.transform(X_tr)
            X_te = scaler.transform(X_te)
        view_train.append(X_tr)
        view_test.append(X_te)

    n_test = len(test_rows)
    cell_decisions = []
    cell_scores = []
    for ci, c in enumerate(configs):
        row_d = []
        row_s = []
        for vj in range(dataset.n_views):
            seed = spawn_seed(config.seed, f"scale/{plan.iteration}/{ci}/{vj}")
            model = train(c, view_train[vj], y_train, scale_seed=seed)
            d, s = predict_batch(model, view_test[vj])
            row_d.append(d)
            row_s.append(s)
        cell_decisions.append(row_d)
        cell_scores.append(row_s)

    records = []
    outcomes = []
    confusion = Confusion()
    for t in range(n_test):
        record = DecisionRecord(
            decisions=tuple(
                tuple(int(cell_decisions[i][j][t]) for j in range(dataset.n_views))
                for i in range(len(configs))
            ),
            scores=tuple(
                tuple(float(cell_scores[i][j][t]) for j in range(dataset.n_views))
                for i in range(len(configs))
            ),
        )
        outcome = fuse(record, tie_break=config.tie_break)
        records.append(record)
        outcomes.append(outcome)
        confusion = confusion + Confusion.tally(outcome.decision, int(y_test[t]))

    return IterationResult(
        iteration=plan.iteration,
        plan=plan,
        train_multiset=tuple(train_rows),
        image_ids=tuple(dataset.ids[i] for i in test_rows),
        true_labels=tuple(int(v) for v in y_test),
        records=tuple(records),
        outcomes=tuple(outcomes),
        confusion=confusion,
        metrics=compute_metrics(confusion),
    )


def run_pipeline(dataset: LabeledDataset, config: PipelineConfig,
                 workers: int = 1) -> EvalReport:
    """All iterations plus the micro-averaged aggregate."""
    if int(workers) < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    primaries = dataset.primary_indices()
    plans = make_splits(dataset.labels[primaries], config)
    # Split positions index into the primary subset; map them back to
    # dataset row numbers so augmented rows can never be sampled directly.
    remapped = [
        SplitPlan(
            iteration=p.iteration,
            train_indices=tuple(int(primaries[i]) for i in p.train_indices),
            test_indices=tuple(int(primaries[i]) for i in p.test_indices),
            bootstrap_indices=None if p.bootstrap_indices is None else tuple(
                int(primaries[i]) for i in p.bootstrap_indices
            ),
        )
        for p in plans
    ]

    if workers == 1:
        results = [run_iteration(p, dataset, config) for p in remapped]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            results = list(pool.map(lambda p: run_iteration(p, dataset, config), remapped))

    aggregate = Confusion()
    for r in results:
        aggregate = aggregate + r.confusion
    return EvalReport(
        dataset=dataset.name or "dataset",
        config=config,
        iterations=tuple(results),
        aggregate_confusion=aggregate,
        aggregate_metrics=compute_metrics(aggregate),
    )
