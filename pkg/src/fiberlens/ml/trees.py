"""Feature saliency via extremely randomized trees (impurity-decrease)."""

import numpy as np

from .. import _kernels
from ..errors import DegenerateData


def score_features(X, labels01, n_trees: int, n_candidates: int, seed: int) -> np.ndarray:
    """Gini importance over a fully randomized tree ensemble, summing to 1.

    Candidate thresholds are uniform draws inside each feature's node-local
    range, so rankings are invariant to positive rescaling of any column.
    Returns the zero vector when no split exists (all features constant).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(labels01, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise DegenerateData("feature matrix and labels disagree")
    ones = int(y.sum())
    if ones < 2 or y.size - ones < 2:
        raise DegenerateData("need at least 2 rows per class to score features")
    raw = _kernels.tree_importance_raw(X, y, int(n_trees), int(n_candidates), int(seed))
    total = float(np.sum(raw))
    if total <= 0.0:
        return np.zeros_like(raw)
    return raw / total
