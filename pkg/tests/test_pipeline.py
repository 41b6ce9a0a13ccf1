"""Region pipeline: leakage, determinism, recovery, aggregation."""

import json

import numpy as np
import pytest

from fiberlens.features.matrix import FeatureMatrix
from fiberlens.ml.config import PipelineConfig
from fiberlens.ml.folds import make_fold_plan
from fiberlens.ml.pipeline import (
    apply_fold_stats,
    collapse_subject_rows,
    fit_fold_stats,
    run_all_regions,
    run_region_pipeline,
)
from fiberlens.ml.report import SaliencyReport
from fiberlens.tract_io.model import CONTROL, DISEASE
from tests.conftest import planted_matrix


def as_matrix(X, y, region=1, visits=1):
    n = X.shape[0]
    subjects = [f"s{i // visits:03d}" for i in range(n)]
    return FeatureMatrix(
        region=region,
        region_name=f"r{region}",
        feature_names=tuple(f"f{j:02d}" for j in range(X.shape[1])),
        scan_ids=tuple(f"s{i // visits:03d}v{i % visits}" for i in range(n)),
        subject_ids=tuple(subjects),
        groups=tuple(DISEASE if label else CONTROL for label in y),
        values=X,
        ok=np.ones_like(X, dtype=bool),
    )


def plan_for(matrix, config):
    disease = sorted({s for s, g in zip(matrix.subject_ids, matrix.groups)
                      if g == DISEASE})
    control = sorted({s for s, g in zip(matrix.subject_ids, matrix.groups)
                      if g == CONTROL})
    return make_fold_plan(disease, control, config)


class TestFoldStats:
    def test_median_imputation_within_training_rows(self):
        values = np.array([[1.0, 10.0], [3.0, 0.0], [5.0, 30.0]])
        ok = np.array([[True, True], [True, False], [True, True]])
        stats = fit_fold_stats(values, ok)
        assert stats.median[1] == 20.0  # median of the OK cells
        X = apply_fold_stats(values, ok, stats)
        assert np.isfinite(X).all()

    def test_constant_feature_standardizes_to_zero(self):
        values = np.array([[2.0, 1.0], [2.0, 3.0], [2.0, 5.0]])
        ok = np.ones_like(values, dtype=bool)
        stats = fit_fold_stats(values, ok)
        X = apply_fold_stats(values, ok, stats)
        np.testing.assert_array_equal(X[:, 0], 0.0)


class TestRegionPipeline:
    def test_importance_sample_count_is_c_times_k(self):
        X, y, _ = planted_matrix(n_rows=40, n_features=8, planted=(0,), seed=0)
        matrix = as_matrix(X, y)
        config = PipelineConfig(k=4, c=3, n_trees=15, seed=0).validate()
        trace = {}
        run_region_pipeline(matrix, plan_for(matrix, config), config, trace=trace)
        assert trace["n_importance_samples"] == 12
        assert len(trace["folds"]) == 12

    def test_leakage_guard_sentinel_outlier(self):
        """A wild value injected into a test-fold row must leave every
        training-fold statistic bitwise unchanged."""
        X, y, _ = planted_matrix(n_rows=40, n_features=6, planted=(0,), seed=1)
        matrix = as_matrix(X, y)
        config = PipelineConfig(k=4, c=2, n_trees=10, seed=3).validate()
        plan = plan_for(matrix, config)

        trace_clean = {}
        run_region_pipeline(matrix, plan, config, trace=trace_clean)

        # poison one subject's row with a sentinel outlier
        victim = plan.test_subjects(0, 0).pop()
        row = matrix.subject_ids.index(victim)
        poisoned = matrix.values.copy()
        poisoned[row, :] = 1e9
        trace_poisoned = {}
        run_region_pipeline(
            as_matrix(poisoned, y), plan, config, trace=trace_poisoned
        )

        folds = trace_clean["folds"]
        # every fold whose training rows exclude the victim keeps identical stats
        checked = 0
        for key, stats in folds.items():
            if row in stats["train_rows"]:
                continue
            other = trace_poisoned["folds"][key]
            np.testing.assert_array_equal(stats["median"], other["median"])
            np.testing.assert_array_equal(stats["mean"], other["mean"])
            np.testing.assert_array_equal(stats["std"], other["std"])
            checked += 1
        assert checked > 0

    def test_constant_shift_absorbed_by_standardization(self):
        X, y, _ = planted_matrix(n_rows=36, n_features=5, planted=(0,), seed=2)
        config = PipelineConfig(k=3, c=2, n_trees=12, seed=1).validate()
        matrix = as_matrix(X, y)
        base = run_region_pipeline(matrix, plan_for(matrix, config), config)
        shifted = X.copy()
        shifted[:, 2] += 1234.5
        again = run_region_pipeline(
            as_matrix(shifted, y), plan_for(matrix, config), config
        )
        # absorbed up to the last ulp of (x + c) - (mean + c)
        for scan_id, sp in base.scans.items():
            assert again.scans[scan_id].p_mean == pytest.approx(sp.p_mean, abs=1e-9)
            assert again.scans[scan_id].prediction == sp.prediction

    def test_pure_noise_accuracy_near_chance(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(120, 20))
        y = np.zeros(120, dtype=np.int64)
        y[:60] = 1
        matrix = as_matrix(X, y)
        config = PipelineConfig(seed=5).validate()
        result = run_region_pipeline(matrix, plan_for(matrix, config), config)
        assert 0.35 <= result.performance["accuracy"]["mean"] <= 0.65

    def test_planted_effect_recovered(self):
        X, y, planted = planted_matrix(seed=10)
        matrix = as_matrix(X, y)
        config = PipelineConfig(seed=10).validate()
        result = run_region_pipeline(matrix, plan_for(matrix, config), config)
        assert result.performance["accuracy"]["mean"] >= 0.85
        ranked = sorted(result.features.items(),
                        key=lambda kv: -kv[1]["importance_mean"])
        top = {name for name, _ in ranked[:7]}
        assert {f"f{j:02d}" for j in planted} <= top
        # planted features also show small rank-test p-values
        for j in planted:
            assert result.features[f"f{j:02d}"]["p_value"] < 0.01

    def test_multi_visit_subjects_never_split(self):
        X, _, _ = planted_matrix(n_rows=48, n_features=4, planted=(0,), seed=4)
        # 24 subjects (12 per class), 2 visits each; signal irrelevant here
        y = np.repeat(np.array([1] * 12 + [0] * 12, dtype=np.int64), 2)
        matrix = as_matrix(X, y, visits=2)
        config = PipelineConfig(k=4, c=2, n_trees=8, seed=2).validate()
        plan = plan_for(matrix, config)
        trace = {}
        run_region_pipeline(matrix, plan, config, trace=trace)
        subject_of_row = matrix.subject_ids
        for stats in trace["folds"].values():
            train_subjects = {subject_of_row[i] for i in stats["train_rows"]}
            test_rows = set(range(matrix.n_rows)) - set(stats["train_rows"])
            test_subjects = {subject_of_row[i] for i in test_rows}
            assert not (train_subjects & test_subjects)

    def test_scan_predictions_aggregate_c_tests(self):
        X, y, _ = planted_matrix(n_rows=30, n_features=4, planted=(0,), seed=6)
        matrix = as_matrix(X, y)
        config = PipelineConfig(k=3, c=4, n_trees=8, seed=0).validate()
        result = run_region_pipeline(matrix, plan_for(matrix, config), config)
        assert len(result.scans) == 30
        for sp in result.scans.values():
            assert sp.n_tests == 4
            assert 0.0 <= sp.p_mean <= 1.0
            assert sp.correct == (sp.prediction == sp.label)
        assert len(result.roc_trials) == 4
        total = sum(result.confusion.values())
        assert total == config.c * config.k * 10  # every fold tests 10 scans


class TestCollapse:
    def test_mean_mode_one_row_per_subject(self):
        X, y, _ = planted_matrix(n_rows=20, n_features=3, planted=(0,), seed=0)
        y = np.repeat(y[:10], 2)
        matrix = as_matrix(X, y, visits=2)
        collapsed = collapse_subject_rows(matrix)
        assert collapsed.n_rows == 10
        first = matrix.subject_ids[0]
        rows = [i for i, s in enumerate(matrix.subject_ids) if s == first]
        np.testing.assert_allclose(
            collapsed.values[0], matrix.values[rows].mean(axis=0)
        )


class TestAllRegions:
    def test_isolation_of_failing_region(self):
        X, y, _ = planted_matrix(n_rows=30, n_features=4, planted=(0,), seed=1)
        good = as_matrix(X, y, region=1)
        # corrupt region: missing planned subjects entirely
        bad = good.select_rows(np.arange(6))
        bad.region = 2
        config = PipelineConfig(k=3, c=2, n_trees=8, seed=0).validate()
        plan = plan_for(good, config)
        results = run_all_regions({1: good, 2: bad}, plan, config)
        assert results[1].error is None
        assert results[2].error is not None

    def test_serial_equals_parallel_region_runs(self):
        X, y, _ = planted_matrix(n_rows=30, n_features=5, planted=(0,), seed=3)
        matrices = {
            r: as_matrix(np.roll(X, r, axis=1), y, region=r) for r in (1, 2, 3)
        }
        config = PipelineConfig(k=3, c=2, n_trees=10, seed=9).validate()
        plan = plan_for(matrices[1], config)
        serial = run_all_regions(matrices, plan, config, jobs=1)
        parallel = run_all_regions(matrices, plan, config, jobs=2)
        names = {r: f"r{r}" for r in matrices}
        doc_a = SaliencyReport(config, {}, serial, names).to_json()
        doc_b = SaliencyReport(config, {}, parallel, names).to_json()
        assert doc_a == doc_b

    def test_report_round_trip(self, small_run):
        _, _, _, _, report = small_run
        again = SaliencyReport.from_json(report.to_json())
        assert again.to_json() == report.to_json()
        assert again.order == report.order

    def test_region_order_sorted_by_saliency(self, small_run):
        _, _, _, _, report = small_run
        good = [r for r in report.order if report.regions[r].error is None]
        saliencies = [report.regions[r].saliency for r in good]
        assert saliencies == sorted(saliencies, reverse=True)
