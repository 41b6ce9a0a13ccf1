"""Linear SVM training and Platt calibration."""

import numpy as np
import pytest

from fiberlens.errors import DegenerateData
from fiberlens.ml.metrics import roc_curve
from fiberlens.ml.svm import fit_platt, sigmoid_probability, train_svm


def blobs(seed=0, n=30, sep=2.0, spread=0.3):
    rng = np.random.default_rng(seed)
    neg = rng.normal((-sep, -sep), spread, size=(n, 2))
    pos = rng.normal((sep, sep), spread, size=(n, 2))
    X = np.vstack([neg, pos])
    y = np.array([0] * n + [1] * n)
    return X, y


class TestTraining:
    def test_separable_blobs_perfect_training_accuracy(self):
        X, y = blobs()
        model = train_svm(X, y, cost=1.0)
        decisions = model.decision(X)
        signs = np.where(y > 0, 1.0, -1.0)
        assert (signs * decisions >= 0).all()
        predictions = model.probability(X) >= 0.5
        assert (predictions == (y == 1)).all()

    def test_separable_auc_is_one(self):
        X, y = blobs(seed=3)
        model = train_svm(X, y, cost=1.0)
        _, _, auc = roc_curve(model.decision(X), y.astype(bool))
        assert auc == pytest.approx(1.0, abs=1e-9)

    def test_mirrored_data_zero_bias(self):
        X, y = blobs(seed=5)
        Xm = np.vstack([X, -X])
        ym = np.concatenate([y, 1 - y])
        model = train_svm(Xm, ym, cost=1.0, tol=1e-12, calibrate=False)
        assert abs(model.bias) < 1e-6

    def test_iteration_cap_reports_no_convergence(self):
        X, y = blobs(seed=1)
        model = train_svm(X, y, cost=1.0, max_passes=1, calibrate=False)
        assert not model.converged
        assert model.weights.shape == (2,)  # model still returned

    def test_requires_both_classes(self):
        X, _ = blobs()
        with pytest.raises(DegenerateData):
            train_svm(X, np.ones(len(X), dtype=int), cost=1.0)

    def test_empty_feature_selection_rejected(self):
        with pytest.raises(DegenerateData):
            train_svm(np.zeros((6, 0)), np.array([0, 0, 0, 1, 1, 1]), cost=1.0)


class TestCalibration:
    def test_probability_monotone_in_decision_value(self):
        X, y = blobs(seed=7, spread=1.8)  # overlapping classes
        model = train_svm(X, y, cost=1.0)
        grid = np.linspace(-5, 5, 201)
        probs = sigmoid_probability(grid, model.platt_a, model.platt_b)
        assert (np.diff(probs) >= -1e-15).all()

    def test_platt_slope_never_positive(self):
        rng = np.random.default_rng(0)
        for trial in range(5):
            decisions = rng.normal(size=40)
            labels = (rng.random(40) < 0.5).astype(int)
            a, _ = fit_platt(decisions, labels)
            assert a <= 0.0

    def test_platt_recovers_informative_sigmoid(self):
        rng = np.random.default_rng(4)
        decisions = rng.normal(scale=2.0, size=400)
        labels = (rng.random(400) < 1.0 / (1.0 + np.exp(-2.0 * decisions))).astype(int)
        a, b = fit_platt(decisions, labels)
        probs = sigmoid_probability(decisions, a, b)
        # calibrated probabilities correlate strongly with the true ones
        truth = 1.0 / (1.0 + np.exp(-2.0 * decisions))
        assert np.corrcoef(probs, truth)[0, 1] > 0.99

    def test_small_class_fallback_still_calibrates(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([0, 0, 1, 1])  # 2 per class: inner 3-fold impossible
        model = train_svm(X, y, cost=1.0)
        assert np.isfinite(model.probability(X)).all()
