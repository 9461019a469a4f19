"""File formats: feature CSVs, dataset manifests, and report rendering.

Feature file layout (plain text, comma separated):

    <set-name>,<dims>
    <image_id>,<label>,v1,...,v<dims>

Labels may be textual ("melanoma" / "not-melanoma") or numeric (+1 / -1).
A manifest is a JSON object naming the dataset and listing feature files
with their expected dimensionalities; paths resolve relative to the
manifest's directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .balance import AUGMENT_MARKER
from .dataset import FeatureMatrix, LabeledDataset
from .errors import ConfigError, DataError
from .harness import EvalReport
from .metrics import METRIC_NAMES, Confusion, MetricSet

DEFAULT_LABEL_TOKENS = {
    "melanoma": 1,
    "not-melanoma": -1,
    "1": 1,
    "+1": 1,
    "-1": -1,
}

REPORT_FORMATS = ("table", "csv", "jsonl")

# Spec'd rendering of an undefined metric in table mode (an em dash).
UNDEFINED_MARK = "—"

_CSV_COLUMNS = (
    "row", "iteration", "tp", "fp", "tn", "fn",
    *METRIC_NAMES, "positive_prevalence",
)


@dataclass(frozen=True)
class FeatureFileRef:
    path: str
    dims: int


@dataclass(frozen=True)
class Manifest:
    name: str
    features: tuple
    label_map: dict = field(default_factory=dict)
    images_dir: str | None = None


def _parse_label(token: str, label_map: dict, where: str) -> int:
    token = token.strip()
    mapping = {**DEFAULT_LABEL_TOKENS, **label_map}
    if token not in mapping:
        raise DataError(f"{where}: unknown label {token!r}")
    return mapping[token]


def read_feature_file(path, label_map: dict | None = None):
    """Parse one feature file; returns (name, ids, labels, values)."""
    label_map = label_map or {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read feature file {path}: {exc}") from exc
    if not lines:
        raise DataError(f"{path}: empty feature file")
    header = lines[0].split(",")
    if len(header) != 2:
        raise DataError(
            f"{path} line 1: header must be '<set-name>,<dims>', got {lines[0]!r}"
        )
    name = header[0].strip()
    try:
        dims = int(header[1])
    except ValueError as exc:
        raise DataError(f"{path} line 1: dimensionality {header[1]!r} is not an integer") from exc
    if dims < 1:
        raise DataError(f"{path} line 1: dimensionality must be >= 1, got {dims}")

    ids: list[str] = []
    labels: list[int] = []
    rows: list[list[str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != dims + 2:
            raise DataError(
                f"{path} line {lineno}: expected {dims} feature values, found {len(parts) - 2}"
            )
        image_id = parts[0].strip()
        if not image_id:
            raise DataError(f"{path} line {lineno}: empty image id")
        if image_id in seen:
            raise DataError(f"{path} line {lineno}: duplicate image id {image_id!r}")
        seen.add(image_id)
        ids.append(image_id)
        labels.append(_parse_label(parts[1], label_map, f"{path} line {lineno}"))
        rows.append(parts[2:])
    if not ids:
        raise DataError(f"{path}: no data rows")
    try:
        values = np.asarray(rows, dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric feature value ({exc})") from exc
    if not np.all(np.isfinite(values)):
        bad = int(np.argwhere(~np.isfinite(values).all(axis=1))[0][0])
        raise DataError(f"{path} line {bad + 2}: non-finite feature value")
    return name, ids, np.asarray(labels, dtype=np.int64), values


def write_feature_file(path, name: str, ids, labels, values) -> None:
    """Emit the feature-file format this package reads back."""
    values = np.asarray(values, dtype=np.float64)
    if "," in name:
        raise ConfigError(f"feature set name may not contain commas: {name!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{name},{values.shape[1]}\n")
        for i, image_id in enumerate(ids):
            token = "melanoma" if int(labels[i]) == 1 else "not-melanoma"
            row = ",".join(repr(float(v)) for v in values[i])
            fh.write(f"{image_id},{token},{row}\n")


def load_manifest(path) -> Manifest:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DataError(f"manifest {path} must be a JSON object")
    name = raw.get("dataset")
    if not isinstance(name, str) or not name:
        raise DataError(f"manifest {path}: 'dataset' must be a non-empty string")
    feats = raw.get("features")
    if not isinstance(feats, list) or not feats:
        raise DataError(f"manifest {path}: 'features' must be a non-empty list")
    base = os.path.dirname(os.path.abspath(path))
    refs = []
    for i, item in enumerate(feats):
        if not isinstance(item, dict) or "path" not in item or "dims" not in item:
            raise DataError(
                f"manifest {path}: features[{i}] needs 'path' and 'dims'"
            )
        dims = item["dims"]
        if not isinstance(dims, int) or dims < 1:
            raise DataError(f"manifest {path}: features[{i}].dims must be a positive integer")
        refs.append(FeatureFileRef(path=os.path.join(base, item["path"]), dims=dims))
    label_map = raw.get("label_map", {})
    if not isinstance(label_map, dict):
        raise DataError(f"manifest {path}: 'label_map' must be an object")
    for token, value in label_map.items():
        if value not in (-1, 1):
            raise DataError(
                f"manifest {path}: label_map[{token!r}] must be -1 or 1, got {value!r}"
            )
    images_dir = raw.get("images_dir")
    if images_dir is not None:
        if not isinstance(images_dir, str):
            raise DataError(f"manifest {path}: 'images_dir' must be a string")
        images_dir = os.path.join(base, images_dir)
    return Manifest(name=name, features=tuple(refs), label_map=dict(label_map),
                    images_dir=images_dir)


def _id_diff(reference: set, other: set, ref_name: str, other_name: str) -> str:
    missing = sorted(reference - other)
    extra = sorted(other - reference)
    parts = []
    if missing:
        parts.append(f"missing from {other_name}: {missing[:10]}")
    if extra:
        parts.append(f"only in {other_name}: {extra[:10]}")
    return f"id sets differ between {ref_name} and {other_name}; " + "; ".join(parts)


def load_dataset(manifest: Manifest) -> LabeledDataset:
    """Load every feature view, align rows by id, and wrap them up.

    Rows are re-ordered into lexicographic id order, so the on-disk row
    order never influences results. Ids carrying the augmentation marker
    are linked back to their source row when that source is present.
    """
    loaded = []
    for ref in manifest.features:
        name, ids, labels, values = read_feature_file(ref.path, manifest.label_map)
        if values.shape[1] != ref.dims:
            raise DataError(
                f"{ref.path}: manifest declares {ref.dims} dims but file carries "
                f"{values.shape[1]}"
            )
        loaded.append((ref.path, name, ids, labels, values))

    ref_path, _, ref_ids, ref_labels, _ = loaded[0]
    ref_set = set(ref_ids)
    for path, _, ids, _, _ in loaded[1:]:
        if set(ids) != ref_set:
            raise DataError(_id_diff(ref_set, set(ids), ref_path, path))

    order = sorted(ref_set)
    label_of = dict(zip(ref_ids, ref_labels))
    for path, _, ids, labels, _ in loaded[1:]:
        for img, lab in zip(ids, labels):
            if label_of[img] != lab:
                raise DataError(
                    f"{path}: label for {img!r} disagrees with {ref_path}"
                )

    views = []
    for _, name, ids, _, values in loaded:
        pos = {img: i for i, img in enumerate(ids)}
        views.append(FeatureMatrix(name=name, values=values[[pos[i] for i in order]]))

    augmented = {}
    id_set = set(order)
    for img in order:
        if AUGMENT_MARKER in img:
            base = img.rsplit(AUGMENT_MARKER, 1)[0]
            if base in id_set:
                augmented[img] = base

    return LabeledDataset(
        ids=tuple(order),
        labels=np.array([label_of[i] for i in order], dtype=np.int64),
        views=tuple(views),
        name=manifest.name,
        augmented_sources=augmented,
    )


def read_labels_csv(path, label_map: dict | None = None):
    """Read (image_id, label) rows; returns (ids, labels array)."""
    label_map = label_map or {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read labels file {path}: {exc}") from exc
    ids = []
    labels = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(",")]
        if lineno == 1 and parts[:2] == ["image_id", "label"]:
            continue  # optional header
        if len(parts) != 2:
            raise DataError(f"{path} line {lineno}: expected 'image_id,label'")
        if parts[0] in seen:
            raise DataError(f"{path} line {lineno}: duplicate image id {parts[0]!r}")
        seen.add(parts[0])
        ids.append(parts[0])
        labels.append(_parse_label(parts[1], label_map, f"{path} line {lineno}"))
    if not ids:
        raise DataError(f"{path}: no label rows")
    return ids, np.asarray(labels, dtype=np.int64)


def _fmt_cell(value: float | None) -> str:
    return UNDEFINED_MARK if value is None else f"{value:.2f}"


def _machine(value: float | None):
    return None if value is None else float(value)


def _report_rows(report: EvalReport) -> list[dict]:
    def row(kind: str, iteration, confusion: Confusion, metrics: MetricSet) -> dict:
        out = {"row": kind, "iteration": iteration,
               "tp": confusion.tp, "fp": confusion.fp,
               "tn": confusion.tn, "fn": confusion.fn}
        for name in METRIC_NAMES:
            out[name] = _machine(getattr(metrics, name))
        out["positive_prevalence"] = _machine(metrics.positive_prevalence)
        return out

    rows = [row("aggregate", None, report.aggregate_confusion, report.aggregate_metrics)]
    rows.extend(
        row("iteration", r.iteration, r.confusion, r.metrics)
        for r in report.iterations
    )
    return rows


def emit_report(report: EvalReport, fmt: str = "table", verbose: bool = False) -> str:
    """Render an EvalReport; machine formats round-trip at full precision."""
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"report format must be one of {REPORT_FORMATS}, got {fmt!r}")

    if fmt == "jsonl":
        rows = _report_rows(report)
        rows[0]["dataset"] = report.dataset
        return "\n".join(json.dumps(r, sort_keys=True) for r in rows)

    if fmt == "csv":
        lines = [",".join(_CSV_COLUMNS)]
        for r in _report_rows(report):
            cells = []
            for col in _CSV_COLUMNS:
                v = r[col]
                if v is None:
                    cells.append("")
                elif isinstance(v, float):
                    cells.append(repr(v))
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        return "\n".join(lines)

    header = f"{'row':<12} " + " ".join(f"{n:>4}" for n in
                                        ("TPR", "TNR", "PPV", "NPV", "ACC", "F1p", "F1n", "MCC"))
    lines = [f"dataset: {report.dataset}", header]
    lines.append(
        f"{'aggregate':<12} " + " ".join(_fmt_cell(v) for v in report.aggregate_metrics.as_row())
    )
    for r in report.iterations:
        lines.append(
            f"{f'iter {r.iteration}':<12} " + " ".join(_fmt_cell(v) for v in r.metrics.as_row())
        )
    if verbose:
        acc = report.aggregate_metrics.acc
        prev = report.aggregate_metrics.positive_prevalence
        lines.append(f"accuracy: {_fmt_cell(acc)}  positive prevalence: {_fmt_cell(prev)}")
    return "\n".join(lines)


def parse_report(text: str, fmt: str) -> list[dict]:
    """Re-parse a machine-format report into its row dictionaries."""
    if fmt == "jsonl":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        for r in rows:
            r.pop("dataset", None)
        return rows
    if fmt == "csv":
        lines = [l for l in text.splitlines() if l.strip()]
        header = lines[0].split(",")
        if tuple(header) != _CSV_COLUMNS:
            raise DataError(f"unexpected csv report header: {header}")
        rows = []
        for line in lines[1:]:
            cells = line.split(",")
            out: dict = {}
            for col, cell in zip(header, cells):
                if col == "row":
                    out[col] = cell
                elif cell == "":
                    out[col] = None
                elif col in ("iteration", "tp", "fp", "tn", "fn"):
                    out[col] = int(cell)
                else:
                    out[col] = float(cell)
            rows.append(out)
        return rows
    raise ConfigError(f"cannot parse report format {fmt!r}")
