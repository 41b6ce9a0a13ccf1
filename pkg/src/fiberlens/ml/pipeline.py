"""Per-region saliency pipeline and the all-regions orchestrator.

For every (repetition, fold): impute and standardize on the training rows
only, score features with the tree ensemble, select the top-m, train the
calibrated linear SVM, and record test-fold probabilities.  Aggregation
yields per-region performance mean/std, a summed confusion matrix, per-trial
and vertically averaged ROC curves, per-feature importance mean/std plus a
rank-test p-value, and per-scan probability mean/std.

Every random stream is keyed by (seed, region, repetition, fold), so any
parallel schedule reproduces the serial result bit for bit.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateData, FiberlensError
from ..features.matrix import FeatureMatrix
from ..rng import derive_seed
from ..tract_io.model import CONTROL, DISEASE
from .config import PipelineConfig
from .folds import FoldPlan
from .metrics import classification_metrics, mean_roc, roc_curve
from .stats import mann_whitney_u
from .svm import train_svm
from .trees import score_features

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True)
class FoldStats:
    """Imputation and standardization parameters fitted on one training fold."""

    median: np.ndarray
    mean: np.ndarray
    std: np.ndarray


def fit_fold_stats(values: np.ndarray, ok: np.ndarray) -> FoldStats:
    """Train-fold medians (over OK cells) and post-imputation mean/std."""
    n_rows, n_feat = values.shape
    median = np.zeros(n_feat)
    for j in range(n_feat):
        col_ok = values[ok[:, j], j]
        if col_ok.size:
            median[j] = float(np.median(col_ok))
    filled = np.where(ok, values, median)
    mean = filled.mean(axis=0)
    std = filled.std(axis=0)
    return FoldStats(median=median, mean=mean, std=std)


def apply_fold_stats(values: np.ndarray, ok: np.ndarray, stats: FoldStats) -> np.ndarray:
    filled = np.where(ok, values, stats.median)
    safe_std = np.where(stats.std > 0, stats.std, 1.0)
    return (filled - stats.mean) / safe_std


@dataclass
class ScanPrediction:
    scan_id: str
    subject_id: str
    label: str
    p_mean: float
    p_std: float
    n_tests: int
    prediction: str
    correct: bool


@dataclass
class RegionResult:
    region: int
    region_name: str
    performance: dict = field(default_factory=dict)  # metric -> {mean, std}
    confusion: dict = field(default_factory=dict)    # tp/fp/fn/tn summed
    roc_grid: list = field(default_factory=list)
    roc_mean_tpr: list = field(default_factory=list)
    roc_std_tpr: list = field(default_factory=list)
    roc_trials: list = field(default_factory=list)   # per repetition
    auc_mean: float = 0.0
    auc_std: float = 0.0
    features: dict = field(default_factory=dict)     # name -> stats dict
    scans: dict = field(default_factory=dict)        # scan_id -> ScanPrediction
    n_disease: int = 0
    n_control: int = 0
    error: str | None = None

    @property
    def saliency(self) -> float:
        return self.performance.get("accuracy", {}).get("mean", 0.0)

    @property
    def saliency_std(self) -> float:
        return self.performance.get("accuracy", {}).get("std", 0.0)


def collapse_subject_rows(matrix: FeatureMatrix) -> FeatureMatrix:
    """One averaged row per subject (the configurable alternative to
    one-row-per-scan); flagged cells are excluded from the average."""
    order: list = []
    rows_of: dict = {}
    for i, subject in enumerate(matrix.subject_ids):
        if subject not in rows_of:
            rows_of[subject] = []
            order.append(subject)
        rows_of[subject].append(i)
    values = np.zeros((len(order), len(matrix.feature_names)))
    ok = np.zeros_like(values, dtype=bool)
    scan_ids, groups = [], []
    for si, subject in enumerate(order):
        idx = rows_of[subject]
        sub_ok = matrix.ok[idx]
        sub_values = matrix.values[idx]
        counts = sub_ok.sum(axis=0)
        sums = np.where(sub_ok, sub_values, 0.0).sum(axis=0)
        with np.errstate(invalid="ignore"):
            values[si] = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
        ok[si] = counts > 0
        scan_ids.append(sorted(matrix.scan_ids[i] for i in idx)[0])
        groups.append(matrix.groups[idx[0]])
    return FeatureMatrix(
        region=matrix.region,
        region_name=matrix.region_name,
        feature_names=matrix.feature_names,
        scan_ids=tuple(scan_ids),
        subject_ids=tuple(order),
        groups=tuple(groups),
        values=values,
        ok=ok,
    )


def _mean_std(samples) -> dict:
    arr = np.asarray(samples, dtype=np.float64)
    return {"mean": float(arr.mean()), "std": float(arr.std())}


def run_region_pipeline(matrix: FeatureMatrix, plan: FoldPlan,
                        config: PipelineConfig, trace: dict | None = None) -> RegionResult:
    """Run the c*k CV pipeline for one region's matrix."""
    if config.subject_rows == "mean":
        matrix = collapse_subject_rows(matrix)

    planned = set(plan.subjects)
    row_idx = [i for i, s in enumerate(matrix.subject_ids) if s in planned]
    missing = planned - set(matrix.subject_ids)
    if missing:
        raise DegenerateData(
            f"region {matrix.region}: no rows for subjects {sorted(missing)[:5]}"
        )
    matrix = matrix.select_rows(np.array(row_idx, dtype=np.int64))

    n_rows = matrix.n_rows
    n_features = len(matrix.feature_names)
    y = np.array([g == DISEASE for g in matrix.groups], dtype=np.int64)
    rows_of_subject: dict = {}
    for i, s in enumerate(matrix.subject_ids):
        rows_of_subject.setdefault(s, []).append(i)

    n_cand = config.candidates_for(n_features)
    top_m = config.top_m_for(n_features)

    importance_samples = np.zeros((config.c * config.k, n_features))
    fold_metrics: list = []
    confusion = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    prob_by_rep = np.full((config.c, n_rows), np.nan)

    sample = 0
    for r in range(config.c):
        fold_of = plan.fold_of(r)
        for f in range(config.k):
            test_rows = np.array(
                sorted(
                    i for s, rows in rows_of_subject.items()
                    if fold_of[s] == f for i in rows
                ),
                dtype=np.int64,
            )
            train_mask = np.ones(n_rows, dtype=bool)
            train_mask[test_rows] = False
            train_rows = np.flatnonzero(train_mask)

            stats = fit_fold_stats(matrix.values[train_rows], matrix.ok[train_rows])
            X_tr = apply_fold_stats(matrix.values[train_rows],
                                    matrix.ok[train_rows], stats)
            X_te = apply_fold_stats(matrix.values[test_rows],
                                    matrix.ok[test_rows], stats)
            y_tr = y[train_rows]
            y_te = y[test_rows]
            if trace is not None:
                trace.setdefault("folds", {})[(r, f)] = {
                    "median": stats.median.copy(),
                    "mean": stats.mean.copy(),
                    "std": stats.std.copy(),
                    "train_rows": train_rows.copy(),
                }

            try:
                importance = score_features(
                    X_tr, y_tr, config.n_trees, n_cand,
                    derive_seed(config.seed, "trees", matrix.region, r, f),
                )
                order = np.lexsort((np.arange(n_features), -importance))
                selected = np.sort(order[:top_m])
                model = train_svm(
                    X_tr[:, selected], y_tr,
                    cost=config.svm_cost, tol=config.svm_tol,
                    max_passes=config.svm_max_passes,
                )
            except FiberlensError as exc:
                raise DegenerateData(
                    f"repetition {r}, fold {f}: {exc}"
                ) from exc

            importance_samples[sample] = importance
            sample += 1

            p_te = model.probability(X_te[:, selected])
            prob_by_rep[r, test_rows] = p_te
            m = classification_metrics(p_te, y_te.astype(bool))
            fold_metrics.append(m)
            confusion["tp"] += m.tp
            confusion["fp"] += m.fp
            confusion["fn"] += m.fn
            confusion["tn"] += m.tn

    if trace is not None:
        trace["n_importance_samples"] = sample

    labels_bool = y.astype(bool)
    trials = []
    for r in range(config.c):
        fpr, tpr, auc = roc_curve(prob_by_rep[r], labels_bool)
        trials.append(
            {"fpr": fpr.tolist(), "tpr": tpr.tolist(), "auc": float(auc)}
        )
    grid, tpr_mean, tpr_std = mean_roc(
        [(np.array(t["fpr"]), np.array(t["tpr"])) for t in trials]
    )

    features = {}
    disease_rows = matrix.group_rows(DISEASE)
    for j, name in enumerate(matrix.feature_names):
        col = matrix.values[:, j]
        ok = matrix.ok[:, j]
        a = col[disease_rows & ok]
        b = col[~disease_rows & ok]
        p_value = 1.0 if (a.size == 0 or b.size == 0) else mann_whitney_u(a, b).p
        features[name] = {
            "importance_mean": float(importance_samples[:, j].mean()),
            "importance_std": float(importance_samples[:, j].std()),
            "p_value": float(p_value),
        }

    scans = {}
    p_mean = prob_by_rep.mean(axis=0)
    p_std = prob_by_rep.std(axis=0)
    for i, scan_id in enumerate(matrix.scan_ids):
        predicted = DISEASE if p_mean[i] >= 0.5 else CONTROL
        scans[scan_id] = ScanPrediction(
            scan_id=scan_id,
            subject_id=matrix.subject_ids[i],
            label=matrix.groups[i],
            p_mean=float(p_mean[i]),
            p_std=float(p_std[i]),
            n_tests=config.c,
            prediction=predicted,
            correct=predicted == matrix.groups[i],
        )

    return RegionResult(
        region=matrix.region,
        region_name=matrix.region_name,
        performance={
            name: _mean_std([getattr(m, name) for m in fold_metrics])
            for name in METRIC_NAMES
        },
        confusion=confusion,
        roc_grid=grid.tolist(),
        roc_mean_tpr=tpr_mean.tolist(),
        roc_std_tpr=tpr_std.tolist(),
        roc_trials=trials,
        auc_mean=float(np.mean([t["auc"] for t in trials])),
        auc_std=float(np.std([t["auc"] for t in trials])),
        features=features,
        scans=scans,
        n_disease=int(labels_bool.sum()),
        n_control=int(n_rows - labels_bool.sum()),
    )


def _region_task(args):
    region, matrix, plan, config = args
    try:
        return region, run_region_pipeline(matrix, plan, config)
    except FiberlensError as exc:
        return region, RegionResult(
            region=region, region_name=matrix.region_name, error=str(exc)
        )


def region_order(results: dict) -> list:
    """Regions sorted by saliency: accuracy mean desc, std asc, id asc;
    errored regions trail in id order."""
    good = [r for r, res in results.items() if res.error is None]
    bad = sorted(r for r, res in results.items() if res.error is not None)
    good.sort(key=lambda r: (-results[r].saliency, results[r].saliency_std, r))
    return good + bad


def run_all_regions(matrices: dict, plan: FoldPlan, config: PipelineConfig,
                    jobs: int = 1, progress=None) -> dict:
    """Evaluate every region independently; failures are recorded, not fatal.

    Returns region -> RegionResult.  ``jobs > 1`` fans regions out to worker
    processes; results are identical to the serial run because all seeding is
    keyed by region.
    """
    tasks = [
        (region, matrices[region], plan, config) for region in sorted(matrices)
    ]
    results: dict = {}
    done = 0
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for region, result in pool.map(_region_task, tasks):
                results[region] = result
                done += 1
                if progress is not None:
                    progress(done, len(tasks))
    else:
        for task in tasks:
            region, result = _region_task(task)
            results[region] = result
            done += 1
            if progress is not None:
                progress(done, len(tasks))
    return results
