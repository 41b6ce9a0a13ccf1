"""Linear soft-margin SVM with Platt probability calibration.

Training runs dual coordinate descent (deterministic cyclic order) on the
hinge + L2 objective, with the bias handled as a regularized constant
feature.  Probabilities come from a sigmoid fit to cross-validated decision
values: a deterministic 3-fold inner split of the training rows, class-wise
round-robin.  The fitted slope is clamped non-positive so the probability
map is always monotone nondecreasing in the decision value.
"""

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import DegenerateData


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    platt_a: float
    platt_b: float
    converged: bool
    passes: int
    gap: float

    def decision(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def probability(self, X) -> np.ndarray:
        """P(disease) for each row."""
        return sigmoid_probability(self.decision(X), self.platt_a, self.platt_b)


def sigmoid_probability(decision, a: float, b: float) -> np.ndarray:
    f = np.asarray(decision, dtype=np.float64) * a + b
    # numerically safe logistic: p = 1 / (1 + exp(f))
    out = np.empty_like(f)
    pos = f >= 0
    out[pos] = np.exp(-f[pos]) / (1.0 + np.exp(-f[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(f[~pos]))
    return out


def fit_hyperplane(X, y_signed, cost, tol, max_passes):
    """Weights and bias from the dual CD kernel (bias as augmented column)."""
    X = np.asarray(X, dtype=np.float64)
    aug = np.hstack([X, np.ones((X.shape[0], 1))])
    w_aug, passes, gap, converged = _kernels.svm_dual_cd(
        aug, np.asarray(y_signed, dtype=np.float64), float(cost),
        float(tol), int(max_passes),
    )
    return np.asarray(w_aug[:-1]), float(w_aug[-1]), passes, gap, converged


def fit_platt(decision, labels01, max_iter: int = 100):
    """Platt's sigmoid fit: minimize the calibration cross-entropy by Newton.

    Returns (a, b) with a <= 0 for P(disease) = 1 / (1 + exp(a*f + b)).
    """
    f = np.asarray(decision, dtype=np.float64)
    y = np.asarray(labels01, dtype=np.float64)
    prior1 = float(y.sum())
    prior0 = float(len(y) - prior1)
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(y > 0, hi, lo)

    a, b = 0.0, float(np.log((prior0 + 1.0) / (prior1 + 1.0)))
    sigma = 1e-12
    eps = 1e-5
    min_step = 1e-10

    def objective(av, bv):
        z = f * av + bv
        # t*z + log(1 + exp(-z)), the stable split avoids overflow either side
        return float(
            np.sum(t * z + np.log1p(np.exp(-np.abs(z))) + np.maximum(-z, 0.0))
        )

    fval = objective(a, b)
    for _ in range(max_iter):
        z = f * a + b
        p = sigmoid_probability(z, 1.0, 0.0)  # 1 / (1 + exp(z)), stable
        q = 1.0 - p
        d2 = p * q
        h11 = float(np.sum(f * f * d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h21 = float(np.sum(f * d2))
        d1 = t - p
        g1 = float(np.sum(f * d1))
        g2 = float(np.sum(d1))
        if abs(g1) < eps and abs(g2) < eps:
            break
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * da + g2 * db
        step = 1.0
        while step >= min_step:
            na, nb = a + step * da, b + step * db
            nf = objective(na, nb)
            if nf < fval + 1e-4 * step * gd:
                a, b, fval = na, nb, nf
                break
            step /= 2.0
        else:
            break
    if a > 0.0:  # anti-predictive calibration data: flatten instead of inverting
        a = 0.0
        b = float(np.log((prior0 + 1.0) / (prior1 + 1.0)))
    return a, b


def _inner_folds(labels01, n_folds: int = 3):
    """Deterministic class-wise round-robin split of row indices."""
    folds = [[] for _ in range(n_folds)]
    for cls in (0, 1):
        members = np.flatnonzero(labels01 == cls)
        for pos, idx in enumerate(members):
            folds[pos % n_folds].append(int(idx))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def train_svm(X, labels01, cost: float = 1.0, tol: float = 1e-6,
              max_passes: int = 4000, calibrate: bool = True) -> LinearModel:
    """Fit the linear model and its probability map on standardized rows.

    ``labels01``: 1 = disease (positive class), 0 = control.
    """
    X = np.asarray(X, dtype=np.float64)
    y01 = np.asarray(labels01, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y01.size:
        raise DegenerateData("feature matrix and labels disagree")
    if X.shape[1] == 0:
        raise DegenerateData("no features selected")
    n_pos = int(y01.sum())
    n_neg = int(y01.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateData("training rows must include both classes")
    y_signed = np.where(y01 > 0, 1.0, -1.0)

    w, b, passes, gap, converged = fit_hyperplane(X, y_signed, cost, tol, max_passes)

    if not calibrate:
        return LinearModel(w, b, -1.0, 0.0, converged, passes, gap)

    # cross-validated decision values keep the sigmoid honest; fall back to
    # in-sample decisions when a class is too small to split three ways
    if n_pos >= 3 and n_neg >= 3:
        cal_decision = np.zeros(y01.size)
        for fold in _inner_folds(y01):
            train_mask = np.ones(y01.size, dtype=bool)
            train_mask[fold] = False
            w_f, b_f, _, _, _ = fit_hyperplane(
                X[train_mask], y_signed[train_mask], cost, tol, max_passes
            )
            cal_decision[fold] = X[fold] @ w_f + b_f
    else:
        cal_decision = X @ w + b

    a, bb = fit_platt(cal_decision, y01)
    return LinearModel(w, b, a, bb, converged, passes, gap)
