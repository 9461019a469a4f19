"""Bucket-of-classifiers ensemble over multiple feature views.

Five heterogeneous classifiers each vote on every feature view; per view
the modal decision and the mean score of the agreeing voters are kept, and
the view whose winning vote is most confident decides. The package also
ships the surrounding evaluation protocol: stratified bootstrap splits,
confusion-based metrics, class balancing by color quantization, and a CLI.
"""

from .balance import (
    AugmentationAssignment,
    BalancePlan,
    ColorQuantization,
    PixelImage,
    execute_plan,
    kmeans_colors,
    plan_balance,
    read_ppm,
    write_ppm,
)
from .calibration import SigmoidCalibrator
from .classifiers import (
    ClassifierConfig,
    Prediction,
    build_classifier,
    default_bucket,
    predict_batch,
    predict_one,
    train,
)
from .dataset import FeatureMatrix, LabeledDataset, PipelineConfig
from .distances import average_ranks, rank_distance, rank_distance_matrix
from .ensemble import DecisionRecord, FusionOutcome, column_mode, fuse
from .errors import ConfigError, DataError, PipelineError
from .harness import (
    EvalReport,
    IterationResult,
    SplitPlan,
    make_splits,
    run_iteration,
    run_pipeline,
)
from .io import (
    Manifest,
    emit_report,
    load_dataset,
    load_manifest,
    parse_report,
    read_feature_file,
    read_labels_csv,
    write_feature_file,
)
from .kernel_logistic import KernelLogisticClassifier, logistic_gradient
from .kernels import kernel_matrix, kernel_value, resolve_kernel_scale
from .knn import RankKNNClassifier
from .metrics import Confusion, MetricSet, compute_metrics
from .rng import seeded_rng
from .standardize import Standardizer, fit_standardizer
from .svm import SMOSVMClassifier

__version__ = "0.1.0"

__all__ = [
    "AugmentationAssignment",
    "BalancePlan",
    "ClassifierConfig",
    "ColorQuantization",
    "ConfigError",
    "Confusion",
    "DataError",
    "DecisionRecord",
    "EvalReport",
    "FeatureMatrix",
    "FusionOutcome",
    "IterationResult",
    "KernelLogisticClassifier",
    "LabeledDataset",
    "Manifest",
    "MetricSet",
    "PipelineConfig",
    "PipelineError",
    "PixelImage",
    "Prediction",
    "RankKNNClassifier",
    "SMOSVMClassifier",
    "SigmoidCalibrator",
    "SplitPlan",
    "Standardizer",
    "average_ranks",
    "build_classifier",
    "column_mode",
    "compute_metrics",
    "default_bucket",
    "emit_report",
    "execute_plan",
    "fit_standardizer",
    "fuse",
    "kernel_matrix",
    "kernel_value",
    "kmeans_colors",
    "load_dataset",
    "load_manifest",
    "logistic_gradient",
    "make_splits",
    "parse_report",
    "plan_balance",
    "predict_batch",
    "predict_one",
    "rank_distance",
    "rank_distance_matrix",
    "read_feature_file",
    "read_labels_csv",
    "read_ppm",
    "resolve_kernel_scale",
    "run_iteration",
    "run_pipeline",
    "seeded_rng",
    "train",
    "write_feature_file",
    "write_ppm",
]
