"""Cohort selection: balanced, age/sex-stratified disease vs control groups.

Selection is subject-level (a subject's visits travel together) inside
fixed 5-year age bins.  Balancing keeps min(n_disease, n_control) subjects
per (age bin, sex) cell, drawn uniformly with a per-cell derived seed, so
the result is a pure function of (records, arguments).
"""

import json
import math
from dataclasses import dataclass

from .errors import BadValue, EmptyCohort
from .rng import generator
from .tract_io.model import CONTROL, DISEASE

AGE_BIN_YEARS = 5


def age_bin(age: float) -> int:
    return int(math.floor(age / AGE_BIN_YEARS))


def bin_lo(bin_index: int) -> float:
    return bin_index * AGE_BIN_YEARS


@dataclass(frozen=True)
class SubjectInfo:
    subject_id: str
    group: str
    sex: str
    age: float          # age at earliest in-range visit


@dataclass(frozen=True)
class CohortSpec:
    disease_subjects: tuple
    control_subjects: tuple
    age_range: tuple            # (min, max), inclusive
    balanced: bool
    seed: int
    strata: tuple               # ((bin_lo, sex, n_disease, n_control), ...)

    def subjects(self, group: str):
        return self.disease_subjects if group == DISEASE else self.control_subjects

    def to_dict(self) -> dict:
        # unbounded ends serialize as null (JSON has no infinities)
        return {
            "disease_subjects": list(self.disease_subjects),
            "control_subjects": list(self.control_subjects),
            "age_range": [a if math.isfinite(a) else None for a in self.age_range],
            "balanced": self.balanced,
            "seed": self.seed,
            "strata": [list(s) for s in self.strata],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "CohortSpec":
        lo, hi = doc["age_range"]
        return cls(
            disease_subjects=tuple(doc["disease_subjects"]),
            control_subjects=tuple(doc["control_subjects"]),
            age_range=(
                -math.inf if lo is None else float(lo),
                math.inf if hi is None else float(hi),
            ),
            balanced=bool(doc["balanced"]),
            seed=int(doc["seed"]),
            strata=tuple(tuple(s) for s in doc.get("strata", [])),
        )


def subject_table(records) -> dict:
    """subject_id -> SubjectInfo over all scans; validates group consistency."""
    by_subject: dict = {}
    for r in sorted(records, key=lambda r: (r.visit_date, r.scan_id)):
        info = by_subject.get(r.subject_id)
        if info is None:
            by_subject[r.subject_id] = SubjectInfo(
                r.subject_id, r.group_label, r.sex, r.age_at_scan
            )
        elif info.group != r.group_label:
            raise BadValue(
                f"subject {r.subject_id} appears in both groups"
            )
    return by_subject


def select_cohort(records, age_range=None, balance=False, seed=0) -> CohortSpec:
    """Pick disease/control subject lists, optionally balanced per stratum."""
    if not records:
        raise EmptyCohort("no scan records given")
    lo, hi = (-math.inf, math.inf) if age_range is None else age_range

    # a subject qualifies if any visit falls in range; stratification age is
    # the age at the earliest qualifying visit
    eligible: dict = {}
    for r in sorted(records, key=lambda r: (r.visit_date, r.scan_id)):
        if not (lo <= r.age_at_scan <= hi):
            continue
        if r.subject_id not in eligible:
            eligible[r.subject_id] = SubjectInfo(
                r.subject_id, r.group_label, r.sex, r.age_at_scan
            )
    subject_table(records)  # group-consistency check over the full table

    cells: dict = {}
    for info in eligible.values():
        cells.setdefault((age_bin(info.age), info.sex), {DISEASE: [], CONTROL: []})[
            info.group
        ].append(info.subject_id)

    chosen = {DISEASE: [], CONTROL: []}
    strata = []
    for (b, sex) in sorted(cells):
        groups = cells[(b, sex)]
        n_d, n_c = len(groups[DISEASE]), len(groups[CONTROL])
        if balance:
            keep = min(n_d, n_c)
            for group in (DISEASE, CONTROL):
                pool = sorted(groups[group])
                rng = generator(seed, "cohort", b, sex, group)
                picked = [pool[i] for i in rng.permutation(len(pool))[:keep]]
                chosen[group].extend(sorted(picked))
            strata.append((bin_lo(b), sex, keep, keep))
        else:
            for group in (DISEASE, CONTROL):
                chosen[group].extend(sorted(groups[group]))
            strata.append((bin_lo(b), sex, n_d, n_c))

    disease = tuple(sorted(chosen[DISEASE]))
    control = tuple(sorted(chosen[CONTROL]))
    if not disease or not control:
        raise EmptyCohort(
            f"selection left {len(disease)} disease / {len(control)} control subjects"
        )
    return CohortSpec(
        disease_subjects=disease,
        control_subjects=control,
        age_range=(float(lo), float(hi)),
        balanced=balance,
        seed=seed,
        strata=tuple(strata),
    )


def demographics(spec: CohortSpec, records) -> dict:
    """Age histogram (shared 5-year bins) and sex counts per group."""
    table = subject_table(records)
    members = {
        DISEASE: [table[s] for s in spec.disease_subjects],
        CONTROL: [table[s] for s in spec.control_subjects],
    }
    ages = [info.age for group in members.values() for info in group]
    b_lo = age_bin(min(ages))
    b_hi = age_bin(max(ages))
    edges = [bin_lo(b) for b in range(b_lo, b_hi + 2)]

    out = {"bin_edges": edges, "groups": {}}
    for group, infos in members.items():
        counts = [0] * (b_hi - b_lo + 1)
        sexes = {"M": 0, "F": 0}
        for info in infos:
            counts[age_bin(info.age) - b_lo] += 1
            sexes[info.sex] += 1
        out["groups"][group] = {
            "age_counts": counts,
            "sex_counts": sexes,
            "total": len(infos),
        }
    return out
