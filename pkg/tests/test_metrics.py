"""Classification metrics and ROC/AUC."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberlens.errors import OneClassOnly
from fiberlens.ml.metrics import classification_metrics, mean_roc, roc_curve


class TestClassificationMetrics:
    def test_textbook_confusion(self):
        # TP 3, FP 1, FN 1, TN 5
        scores = [0.9, 0.8, 0.7, 0.6, 0.4, 0.1, 0.2, 0.3, 0.1, 0.2]
        labels = [1, 1, 1, 0, 1, 0, 0, 0, 0, 0]
        m = classification_metrics(scores, np.array(labels, dtype=bool))
        assert (m.tp, m.fp, m.fn, m.tn) == (3, 1, 1, 5)
        assert m.precision == pytest.approx(0.75)
        assert m.recall == pytest.approx(0.75)
        assert m.f1 == pytest.approx(0.75)
        assert m.accuracy == pytest.approx(0.8)

    def test_all_correct(self):
        m = classification_metrics([0.9, 0.8, 0.1], np.array([1, 1, 0], dtype=bool))
        assert m.accuracy == m.precision == m.recall == m.f1 == 1.0

    def test_no_positive_predictions_flagged(self):
        m = classification_metrics([0.1, 0.2, 0.3], np.array([1, 0, 1], dtype=bool))
        assert m.precision == 0.0
        assert not m.precision_defined
        assert m.recall == 0.0 and m.recall_defined

    def test_threshold_inclusive(self):
        m = classification_metrics([0.5], np.array([1], dtype=bool), threshold=0.5)
        assert m.tp == 1


class TestRoc:
    def test_perfect_ranking(self):
        _, _, auc = roc_curve([0.9, 0.8, 0.3, 0.1], np.array([1, 1, 0, 0], dtype=bool))
        assert auc == pytest.approx(1.0)

    def test_three_of_four_concordant(self):
        _, _, auc = roc_curve([0.9, 0.8, 0.3, 0.1], np.array([1, 0, 1, 0], dtype=bool))
        assert auc == pytest.approx(0.75)

    def test_random_scores_near_half(self):
        rng = np.random.default_rng(0)
        scores = rng.random(1000)
        labels = np.arange(1000) % 2 == 0
        _, _, auc = roc_curve(scores, labels)
        assert auc == pytest.approx(0.5, abs=0.05)

    def test_one_class_only(self):
        with pytest.raises(OneClassOnly):
            roc_curve([0.4, 0.6], np.array([1, 1], dtype=bool))

    def test_curve_endpoints(self):
        fpr, tpr, _ = roc_curve([0.7, 0.4, 0.2], np.array([1, 0, 1], dtype=bool))
        assert fpr[0] == tpr[0] == 0.0
        assert fpr[-1] == tpr[-1] == 1.0
        assert (np.diff(fpr) >= 0).all() and (np.diff(tpr) >= 0).all()

    def test_tied_scores_merge_points(self):
        fpr, tpr, auc = roc_curve(
            [0.5, 0.5, 0.5, 0.5], np.array([1, 0, 1, 0], dtype=bool)
        )
        # a single threshold step: diagonal curve
        np.testing.assert_allclose(fpr, [0.0, 1.0])
        np.testing.assert_allclose(tpr, [0.0, 1.0])
        assert auc == pytest.approx(0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_auc_invariant_under_monotone_transform(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 40))
        scores = rng.normal(size=n)
        labels = rng.random(n) < 0.5
        if labels.all() or not labels.any():
            labels[0] = True
            labels[-1] = False
        _, _, auc = roc_curve(scores, labels)
        _, _, auc2 = roc_curve(np.exp(2.0 * scores) + 5.0, labels)
        assert auc2 == pytest.approx(auc, abs=1e-12)

    def test_matches_sklearn_auc(self):
        sk_metrics = pytest.importorskip("sklearn.metrics")
        rng = np.random.default_rng(5)
        for _ in range(10):
            scores = rng.normal(size=50)
            labels = rng.random(50) < 0.4
            if labels.all() or not labels.any():
                continue
            _, _, auc = roc_curve(scores, labels)
            assert auc == pytest.approx(sk_metrics.roc_auc_score(labels, scores))


class TestMeanRoc:
    def test_vertical_averaging_grid(self):
        curves = [
            (np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.8, 1.0])),
            (np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.6, 1.0])),
        ]
        grid, mean_tpr, std_tpr = mean_roc(curves)
        assert len(grid) == 101
        mid = np.flatnonzero(grid == 0.5)[0]
        assert mean_tpr[mid] == pytest.approx(0.7)
        assert std_tpr[mid] == pytest.approx(0.1)
