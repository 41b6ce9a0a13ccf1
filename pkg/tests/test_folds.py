"""Repeated stratified subject-grouped k-fold plans."""

import numpy as np
import pytest

from fiberlens.errors import TooFewSubjects
from fiberlens.ml.config import PipelineConfig
from fiberlens.ml.folds import make_fold_plan
from fiberlens.tract_io.model import CONTROL, DISEASE


def subjects(prefix, n):
    return [f"{prefix}{i:03d}" for i in range(n)]


def test_every_subject_tested_exactly_c_times():
    config = PipelineConfig(k=5, c=10, seed=1)
    plan = make_fold_plan(subjects("d", 68), subjects("c", 68), config)
    # a subject sits in exactly one test fold per repetition
    counts = {s: 0 for s in plan.subjects}
    for r in range(config.c):
        for f in range(config.k):
            for s in plan.test_subjects(r, f):
                counts[s] += 1
    assert set(counts.values()) == {10}


def test_exact_divisibility_two_per_class_per_fold():
    config = PipelineConfig(k=5, c=3, seed=0)
    plan = make_fold_plan(subjects("d", 10), subjects("c", 10), config)
    for r in range(config.c):
        for f in range(config.k):
            members = plan.test_subjects(r, f)
            d = sum(1 for s in members if s.startswith("d"))
            c = sum(1 for s in members if s.startswith("c"))
            assert (d, c) == (2, 2)


def test_too_few_subjects():
    config = PipelineConfig(k=5, c=2, seed=0)
    with pytest.raises(TooFewSubjects):
        make_fold_plan(subjects("d", 4), subjects("c", 4), config)


def test_folds_partition_each_repetition():
    config = PipelineConfig(k=4, c=6, seed=9)
    plan = make_fold_plan(subjects("d", 13), subjects("c", 17), config)
    universe = set(plan.subjects)
    for r in range(config.c):
        seen = []
        for f in range(config.k):
            members = plan.test_subjects(r, f)
            seen.extend(members)
        assert len(seen) == len(universe)
        assert set(seen) == universe


def test_class_counts_within_one_of_proportional():
    config = PipelineConfig(k=5, c=4, seed=2)
    n_d, n_c = 23, 31
    plan = make_fold_plan(subjects("d", n_d), subjects("c", n_c), config)
    for r in range(config.c):
        for f in range(config.k):
            members = plan.test_subjects(r, f)
            d = sum(1 for s in members if s.startswith("d"))
            c = sum(1 for s in members if s.startswith("c"))
            assert abs(d - n_d / config.k) <= 1
            assert abs(c - n_c / config.k) <= 1


def test_repetitions_differ_but_seeded_runs_match():
    config = PipelineConfig(k=5, c=8, seed=5)
    a = make_fold_plan(subjects("d", 20), subjects("c", 20), config)
    b = make_fold_plan(subjects("d", 20), subjects("c", 20), config)
    np.testing.assert_array_equal(a.assignment, b.assignment)
    # shuffling makes at least some repetitions distinct
    distinct = {tuple(row) for row in a.assignment}
    assert len(distinct) > 1


def test_input_order_irrelevant():
    config = PipelineConfig(k=3, c=2, seed=7)
    a = make_fold_plan(subjects("d", 9), subjects("c", 9), config)
    b = make_fold_plan(subjects("d", 9)[::-1], subjects("c", 9)[::-1], config)
    assert a.subjects == b.subjects
    np.testing.assert_array_equal(a.assignment, b.assignment)
