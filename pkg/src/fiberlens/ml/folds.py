"""Repeated stratified k-fold plans, grouped by subject.

Each repetition shuffles every class with its own derived seed and deals the
subjects round-robin into k folds, so per-fold class counts stay within one
of proportional and every subject lands in a test fold exactly once per
repetition (c times over the plan).  Scans never split across folds because
folds are assigned at subject level.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewSubjects
from ..rng import generator
from ..tract_io.model import CONTROL, DISEASE


@dataclass(frozen=True)
class FoldPlan:
    k: int
    c: int
    subjects: tuple                # deterministic subject order
    groups: tuple                  # class per subject, aligned
    assignment: np.ndarray         # (c, n_subjects) fold index

    def fold_of(self, repetition: int) -> dict:
        """subject -> fold index for one repetition."""
        return {
            s: int(self.assignment[repetition, i])
            for i, s in enumerate(self.subjects)
        }

    def test_subjects(self, repetition: int, fold: int) -> set:
        row = self.assignment[repetition]
        return {s for i, s in enumerate(self.subjects) if row[i] == fold}

    def test_counts(self) -> dict:
        """subject -> number of test appearances across the plan (always c)."""
        return {s: int(self.assignment.shape[0]) for s in self.subjects}


def make_fold_plan(disease_subjects, control_subjects, config) -> FoldPlan:
    """Build the (c, k) plan for a cohort; deterministic in config.seed."""
    classes = {
        DISEASE: tuple(sorted(disease_subjects)),
        CONTROL: tuple(sorted(control_subjects)),
    }
    for group, members in classes.items():
        if len(members) < config.k:
            raise TooFewSubjects(
                f"{group} has {len(members)} subjects, need >= k={config.k}"
            )
    subjects = classes[DISEASE] + classes[CONTROL]
    groups = (DISEASE,) * len(classes[DISEASE]) + (CONTROL,) * len(classes[CONTROL])
    index = {s: i for i, s in enumerate(subjects)}

    assignment = np.zeros((config.c, len(subjects)), dtype=np.int64)
    for r in range(config.c):
        for group, members in classes.items():
            rng = generator(config.seed, "folds", r, group)
            order = rng.permutation(len(members))
            for pos, j in enumerate(order):
                assignment[r, index[members[j]]] = pos % config.k
    return FoldPlan(
        k=config.k,
        c=config.c,
        subjects=subjects,
        groups=groups,
        assignment=assignment,
    )
