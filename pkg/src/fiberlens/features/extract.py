"""Feature extraction: per-region tract and tensor statistics.

Tract features: FN (fiber count) and AFL (mean polyline arc length, mm).
Tensor features: the mean of per-vertex trilinear samples over a bundle,
vertex-weighted by default (a fiber-weighted variant is available for
sensitivity checks).  Each feature is computed for the whole ROI and for the
intra-/inter-connect sub-bundles, plus a signed left-minus-right asymmetry
against the region's contralateral homologue.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import MissingVolume
from ..tract_io.bundles import assign_bundles, homologue_pairs, region_hemispheres
from ..tract_io.model import INTER, INTRA, LabelVolume, ScanRecord
from ..tract_io.tck import parse_tck
from ..tract_io.volume import load_volume, sample_trilinear
from .matrix import FeatureMatrix
from .names import ASYM_PREFIX, SCOPES, base_feature_names, measure_feature

OK = True
EMPTY = False


def polyline_length(points: np.ndarray) -> float:
    """Arc length of a polyline in millimeters."""
    pts = np.asarray(points, dtype=np.float64)
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())


def tract_features(lengths: np.ndarray) -> dict:
    """FN/AFL from per-fiber arc lengths; AFL flagged on an empty bundle."""
    n = int(lengths.size)
    if n == 0:
        return {"FN": (0.0, OK), "AFL": (0.0, EMPTY)}
    return {"FN": (float(n), OK), "AFL": (float(lengths.mean()), OK)}


def tensor_mean(samples, inside, fiber_weighted: bool = False):
    """Bundle mean of per-vertex samples, out-of-bounds vertices excluded.

    ``samples``/``inside`` are per-fiber arrays.  Returns (value, ok); ok is
    False when the bundle is empty or every vertex is out of bounds.
    """
    if fiber_weighted:
        per_fiber = [
            float(s[m].mean()) for s, m in zip(samples, inside) if m.any()
        ]
        if not per_fiber:
            return 0.0, EMPTY
        return float(np.mean(per_fiber)), OK
    total = 0.0
    count = 0
    for s, m in zip(samples, inside):
        if m.any():
            total += float(s[m].sum())
            count += int(m.sum())
    if count == 0:
        return 0.0, EMPTY
    return total / count, OK


def asymmetry(left, right):
    """Signed left-minus-right difference; flagged unless both sides are OK."""
    lv, lok = left
    rv, rok = right
    if not (lok and rok):
        return 0.0, EMPTY
    return lv - rv, OK


@dataclass
class ScanData:
    """Geometry and samples for one scan, ready for feature assembly."""

    record: ScanRecord
    streamlines: list
    assignments: list
    lengths: np.ndarray                 # per fiber, mm
    samples: dict                       # measure -> list of per-fiber arrays
    inside: dict                        # measure -> list of per-fiber bool masks


def load_scan_data(record: ScanRecord, base_dir, label_volume: LabelVolume,
                   measures) -> ScanData:
    """Parse one scan's tracks, assign bundles, and sample every measure."""
    base = Path(base_dir)
    if not record.tracks_path:
        raise MissingVolume(f"scan {record.scan_id} has no tracks file")
    streamlines = parse_tck((base / record.tracks_path).read_bytes())
    assignments = assign_bundles(streamlines, label_volume)
    lengths = np.array([polyline_length(s) for s in streamlines])

    counts = [s.shape[0] for s in streamlines]
    stacked = (
        np.concatenate([np.asarray(s, dtype=np.float64) for s in streamlines])
        if streamlines else np.zeros((0, 3))
    )
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(int)

    samples: dict = {}
    inside: dict = {}
    for measure in measures:
        descriptor = record.volume_paths.get(measure)
        if descriptor is None:
            raise MissingVolume(
                f"scan {record.scan_id} lacks a volume for measure {measure}"
            )
        volume = load_volume(base / descriptor)
        values, mask = sample_trilinear(volume, stacked)
        samples[measure] = [
            values[offsets[i]:offsets[i + 1]] for i in range(len(counts))
        ]
        inside[measure] = [
            mask[offsets[i]:offsets[i + 1]] for i in range(len(counts))
        ]
    return ScanData(
        record=record,
        streamlines=streamlines,
        assignments=assignments,
        lengths=lengths,
        samples=samples,
        inside=inside,
    )


def bundle_indices(assignments, label: int) -> dict:
    """Fiber indices touching ``label``, split by scope."""
    all_idx, intra, inter = [], [], []
    for i, a in enumerate(assignments):
        if not a.touches(label):
            continue
        all_idx.append(i)
        if a.connection_class == INTRA:
            intra.append(i)
        elif a.connection_class == INTER:
            inter.append(i)
    return {"all": all_idx, "intra": intra, "inter": inter}


def region_base_features(scan: ScanData, label: int, measures,
                         fiber_weighted: bool = False) -> dict:
    """Base (non-asymmetry) features of one region for one scan."""
    scopes = bundle_indices(scan.assignments, label)
    out = {}
    for scope in SCOPES:
        idx = scopes[scope]
        tract = tract_features(scan.lengths[idx] if idx else np.zeros(0))
        out[f"FN_{scope}"] = tract["FN"]
        out[f"AFL_{scope}"] = tract["AFL"]
        for measure in measures:
            sample_list = [scan.samples[measure][i] for i in idx]
            inside_list = [scan.inside[measure][i] for i in idx]
            out[f"{measure_feature(measure)}_{scope}"] = tensor_mean(
                sample_list, inside_list, fiber_weighted
            )
    return out


def build_feature_matrices(scans, label_volume: LabelVolume, measures,
                           fiber_weighted: bool = False,
                           include_asymmetry: bool = True) -> dict:
    """Per-region FeatureMatrix for every atlas region.

    Row order follows the scan order given; column order is the canonical
    feature order.  Extraction is pure per (scan, region), so any parallel
    split over scans or regions reproduces this output exactly.
    """
    base_names = base_feature_names(measures)
    names = tuple(
        base_names + [ASYM_PREFIX + b for b in base_names]
        if include_asymmetry else base_names
    )
    labels = [r.label for r in label_volume.atlas]
    pairs = homologue_pairs(label_volume)
    hemis = region_hemispheres(label_volume)

    # base features for every (scan, region); asymmetry joins homologues after
    per_scan: list = []
    for scan in scans:
        per_scan.append(
            {
                label: region_base_features(scan, label, measures, fiber_weighted)
                for label in labels
            }
        )

    matrices = {}
    for label in labels:
        rows = np.zeros((len(scans), len(names)))
        ok = np.zeros((len(scans), len(names)), dtype=bool)
        for i, scan in enumerate(scans):
            base = per_scan[i][label]
            for j, name in enumerate(names):
                if not name.startswith(ASYM_PREFIX):
                    rows[i, j], ok[i, j] = base[name]
                    continue
                stem = name[len(ASYM_PREFIX):]
                mate = pairs.get(label)
                if mate is None:
                    rows[i, j], ok[i, j] = 0.0, EMPTY
                    continue
                left_label = label if hemis.get(label) == "L" else mate
                right_label = mate if left_label == label else label
                rows[i, j], ok[i, j] = asymmetry(
                    per_scan[i][left_label][stem],
                    per_scan[i][right_label][stem],
                )
        region = label_volume.region(label)
        matrices[label] = FeatureMatrix(
            region=label,
            region_name=region.name,
            feature_names=names,
            scan_ids=tuple(s.record.scan_id for s in scans),
            subject_ids=tuple(s.record.subject_id for s in scans),
            groups=tuple(s.record.group_label for s in scans),
            values=rows,
            ok=ok,
        )
    return matrices
