"""Comparative view products: trends, histograms, scatter joins, timelines.

All functions are pure over the feature matrix, the scan metadata, and a
finished region result; outputs are plain dicts ready for JSON."""

import numpy as np

from ..cohort import AGE_BIN_YEARS, age_bin, bin_lo
from ..errors import UnknownScan, UnknownSubject
from ..features.matrix import FeatureMatrix
from ..tract_io.model import CONTROL, DISEASE

HISTOGRAM_BINS = 20


def trend_series(matrix: FeatureMatrix, records_by_scan: dict, feature: str,
                 split_by_sex: bool = False) -> dict:
    """Per-group (optionally per-sex) age-binned mean/std series.

    Bins are fixed 5-year intervals shared by all series; empty bins are
    omitted.  Series keys: "DISEASE"/"CONTROL" or "DISEASE/M" etc.
    """
    values, ok = matrix.column(feature)
    buckets: dict = {}
    for i, scan_id in enumerate(matrix.scan_ids):
        if not ok[i]:
            continue
        record = records_by_scan.get(scan_id)
        if record is None:
            raise UnknownScan(f"scan {scan_id} missing from metadata")
        key = (
            f"{matrix.groups[i]}/{record.sex}" if split_by_sex else matrix.groups[i]
        )
        buckets.setdefault(key, {}).setdefault(
            age_bin(record.age_at_scan), []
        ).append(float(values[i]))

    series = {}
    for key in sorted(buckets):
        points = []
        for b in sorted(buckets[key]):
            vals = np.array(buckets[key][b])
            points.append(
                {
                    "age": bin_lo(b) + AGE_BIN_YEARS / 2.0,
                    "mean": float(vals.mean()),
                    "std": float(vals.std()),
                    "n": int(vals.size),
                }
            )
        series[key] = points
    return {"feature": feature, "bin_years": AGE_BIN_YEARS, "series": series}


def histogram(matrix: FeatureMatrix, feature: str,
              bins: int = HISTOGRAM_BINS) -> dict:
    """Group histograms over shared edges spanning the global value range."""
    values, ok = matrix.column(feature)
    pooled = values[ok]
    if pooled.size == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = float(pooled.min()), float(pooled.max())
        if lo == hi:  # degenerate constant column still needs a finite range
            lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    counts = {}
    for group in (DISEASE, CONTROL):
        mask = matrix.group_rows(group) & ok
        counts[group] = np.histogram(values[mask], bins=edges)[0].tolist()
    return {"feature": feature, "bin_edges": edges.tolist(), "counts": counts}


def prediction_feature_points(region_result, matrix: FeatureMatrix,
                              feature: str) -> list:
    """Join per-scan predictions with one feature for the Pr-vs-feature plot."""
    values, ok = matrix.column(feature)
    by_scan = {s: i for i, s in enumerate(matrix.scan_ids)}
    points = []
    for scan_id in sorted(region_result.scans):
        sp = region_result.scans[scan_id]
        i = by_scan.get(scan_id)
        if i is None:
            continue
        points.append(
            {
                "scan_id": scan_id,
                "subject_id": sp.subject_id,
                "value": float(values[i]) if ok[i] else None,
                "p_disease": sp.p_mean,
                "p_std": sp.p_std,
                "label": sp.label,
                "prediction": sp.prediction,
                "correct": sp.correct,
            }
        )
    return points


def subject_timeline(region_result, matrix: FeatureMatrix,
                     records_by_scan: dict, subject_id: str,
                     feature: str) -> dict:
    """A subject's visits in date order plus control-group reference lines."""
    values, ok = matrix.column(feature)
    rows = [
        i for i, s in enumerate(matrix.subject_ids) if s == subject_id
    ]
    if not rows:
        raise UnknownSubject(f"subject {subject_id} has no rows in this region")

    visits = []
    for i in rows:
        scan_id = matrix.scan_ids[i]
        record = records_by_scan.get(scan_id)
        if record is None:
            raise UnknownScan(f"scan {scan_id} missing from metadata")
        sp = region_result.scans.get(scan_id)
        visits.append(
            {
                "scan_id": scan_id,
                "visit_date": record.visit_date.isoformat(),
                "value": float(values[i]) if ok[i] else None,
                "p_disease": sp.p_mean if sp else None,
            }
        )
    visits.sort(key=lambda v: (v["visit_date"], v["scan_id"]))

    control = matrix.group_rows(CONTROL) & ok
    ref = values[control]
    reference = {
        "mean": float(ref.mean()) if ref.size else None,
        "std": float(ref.std()) if ref.size else None,
    }
    return {
        "subject_id": subject_id,
        "feature": feature,
        "visits": visits,
        "control_reference": reference,
    }
