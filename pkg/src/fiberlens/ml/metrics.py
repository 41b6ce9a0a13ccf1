"""Binary classification metrics and ROC curves (disease = positive class)."""

from dataclasses import dataclass

import numpy as np

from ..errors import OneClassOnly

ROC_GRID_POINTS = 101


@dataclass(frozen=True)
class ClassificationMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    tn: int
    # zero-denominator cases are reported as 0.0 with the flag cleared
    precision_defined: bool = True
    recall_defined: bool = True
    f1_defined: bool = True

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def classification_metrics(scores, labels, threshold: float = 0.5) -> ClassificationMetrics:
    """Metrics at a probability threshold; prediction is score >= threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have equal length")
    pred = scores >= threshold
    tp = int(np.count_nonzero(pred & labels))
    fp = int(np.count_nonzero(pred & ~labels))
    fn = int(np.count_nonzero(~pred & labels))
    tn = int(np.count_nonzero(~pred & ~labels))
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total if total else 0.0
    p_def = (tp + fp) > 0
    r_def = (tp + fn) > 0
    precision = tp / (tp + fp) if p_def else 0.0
    recall = tp / (tp + fn) if r_def else 0.0
    f_def = p_def and r_def and (precision + recall) > 0
    f1 = 2 * precision * recall / (precision + recall) if f_def else 0.0
    return ClassificationMetrics(
        accuracy=accuracy, precision=precision, recall=recall, f1=f1,
        tp=tp, fp=fp, fn=fn, tn=tn,
        precision_defined=p_def, recall_defined=r_def, f1_defined=f_def,
    )


def roc_curve(scores, labels):
    """ROC points over the unique-score threshold sweep plus trapezoid AUC.

    Returns ``(fpr, tpr, auc)``; curve runs from (0, 0) to (1, 1).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = int(labels.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise OneClassOnly("ROC needs at least one example of each class")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    tp_cum = np.cumsum(sorted_labels)
    fp_cum = np.cumsum(~sorted_labels)
    # keep one point per distinct threshold (the last index of each run)
    distinct = np.flatnonzero(np.diff(sorted_scores) != 0)
    keep = np.concatenate([distinct, [scores.size - 1]])
    tpr = np.concatenate([[0.0], tp_cum[keep] / n_pos])
    fpr = np.concatenate([[0.0], fp_cum[keep] / n_neg])
    auc = float(np.trapezoid(tpr, fpr))
    return fpr, tpr, auc


def mean_roc(trial_curves, n_points: int = ROC_GRID_POINTS):
    """Vertical averaging of trial ROC curves on a fixed FPR grid."""
    grid = np.linspace(0.0, 1.0, n_points)
    stack = np.array(
        [np.interp(grid, fpr, tpr) for fpr, tpr in trial_curves]
    )
    return grid, stack.mean(axis=0), stack.std(axis=0)
