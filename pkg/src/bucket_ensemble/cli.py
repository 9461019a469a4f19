"""Command-line interface.

Exit codes: 0 on success, 2 for data errors, 3 for configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .balance import execute_plan, plan_balance, read_ppm, write_ppm
from .dataset import PipelineConfig
from .errors import ConfigError, DataError, PipelineError
from .harness import run_pipeline
from .io import (
    REPORT_FORMATS,
    emit_report,
    load_dataset,
    load_manifest,
    read_labels_csv,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; bad flags are config errors here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bucket-ensemble",
                     description="Multi-view bucket-of-classifiers evaluation pipeline")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="evaluate a dataset described by a manifest")
    run.add_argument("--manifest", required=True, help="path to the dataset manifest (JSON)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--iterations", type=int, default=10)
    run.add_argument("--split", type=float, default=0.8,
                     help="train fraction per iteration (default 0.8)")
    run.add_argument("--bootstrap-train", default=True,
                     action=argparse.BooleanOptionalAction,
                     help="resample the train rows with replacement (default on)")
    run.add_argument("--standardize", default=True,
                     action=argparse.BooleanOptionalAction,
                     help="z-score each view on its train rows (default on)")
    run.add_argument("--tie-break", choices=("prefer-positive", "lowest-index"),
                     default="prefer-positive")
    run.add_argument("--report", choices=REPORT_FORMATS, default="table")
    run.add_argument("--workers", type=int, default=1,
                     help="iterations computed in parallel; output is identical for any value")
    run.add_argument("--verbose", action="store_true",
                     help="also report positive prevalence next to accuracy")
    run.set_defaults(handler=_cmd_run)

    balance = sub.add_parser("balance",
                             help="write color-quantized copies of minority images")
    balance.add_argument("--images", required=True, help="directory of <image_id>.ppm files")
    balance.add_argument("--labels", required=True, help="csv of image_id,label rows")
    balance.add_argument("--out", required=True, help="output directory")
    balance.add_argument("--seed", type=int, default=0)
    balance.set_defaults(handler=_cmd_balance)

    validate = sub.add_parser("validate", help="check a manifest and its feature files")
    validate.add_argument("--manifest", required=True)
    validate.set_defaults(handler=_cmd_validate)

    return parser


def _cmd_run(args) -> int:
    dataset = load_dataset(load_manifest(args.manifest))
    config = PipelineConfig(
        split_ratio=args.split,
        iterations=args.iterations,
        seed=args.seed,
        standardize=args.standardize,
        tie_break=args.tie_break.replace("-", "_"),
        bootstrap_train=args.bootstrap_train,
    )
    report = run_pipeline(dataset, config, workers=args.workers)
    print(emit_report(report, args.report, verbose=args.verbose))
    return 0


def _cmd_balance(args) -> int:
    ids, labels = read_labels_csv(args.labels)
    plan = plan_balance(labels, ids=ids, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    if plan.deficit == 0:
        print("classes already balanced; nothing to do")
        return 0
    sources = {}
    for a in plan.assignments:
        if a.source_id not in sources:
            path = os.path.join(args.images, f"{a.source_id}.ppm")
            if not os.path.exists(path):
                raise DataError(f"missing image for {a.source_id!r}: {path}")
            sources[a.source_id] = read_ppm(path)
    outputs = execute_plan(plan, sources, seed=args.seed)
    for a in plan.assignments:
        write_ppm(outputs[a.output_id], os.path.join(args.out, f"{a.output_id}.ppm"))
    listing = os.path.join(args.out, "augmented_labels.csv")
    with open(listing, "w", encoding="utf-8") as fh:
        fh.write("image_id,label,source_id,k\n")
        token = "melanoma" if plan.minority_label == 1 else "not-melanoma"
        for a in plan.assignments:
            fh.write(f"{a.output_id},{token},{a.source_id},{a.k}\n")
    print(f"wrote {plan.deficit} augmented images to {args.out}")
    print(f"labels for the new images: {listing}")
    return 0


def _cmd_validate(args) -> int:
    manifest = load_manifest(args.manifest)
    dataset = load_dataset(manifest)
    n_pos = int((dataset.labels == 1).sum())
    n_neg = int((dataset.labels == -1).sum())
    print(f"dataset: {dataset.name}")
    print(f"images: {dataset.n_images} ({n_pos} positive, {n_neg} negative)")
    if dataset.augmented_sources:
        print(f"augmented rows: {len(dataset.augmented_sources)}")
    for view in dataset.views:
        print(f"view: {view.name} ({view.dims} dims)")
    print("ok")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 3
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
