"""The saliency engine: CV plans, tree importance, SVM, stats, pipeline."""

from .config import PipelineConfig
from .folds import FoldPlan, make_fold_plan
from .metrics import (
    ClassificationMetrics,
    classification_metrics,
    mean_roc,
    roc_curve,
)
from .pipeline import (
    FoldStats,
    RegionResult,
    ScanPrediction,
    apply_fold_stats,
    collapse_subject_rows,
    fit_fold_stats,
    region_order,
    run_all_regions,
    run_region_pipeline,
)
from .report import SaliencyReport
from .stats import MannWhitneyResult, mann_whitney_u
from .svm import LinearModel, fit_platt, train_svm
from .trees import score_features

__all__ = [
    "ClassificationMetrics",
    "FoldPlan",
    "FoldStats",
    "LinearModel",
    "MannWhitneyResult",
    "PipelineConfig",
    "RegionResult",
    "SaliencyReport",
    "ScanPrediction",
    "apply_fold_stats",
    "classification_metrics",
    "collapse_subject_rows",
    "fit_fold_stats",
    "fit_platt",
    "make_fold_plan",
    "mann_whitney_u",
    "mean_roc",
    "region_order",
    "roc_curve",
    "run_all_regions",
    "run_region_pipeline",
    "score_features",
    "train_svm",
]
