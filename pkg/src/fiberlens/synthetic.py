"""Synthetic dataset generation for desk-scale testing and benchmarks.

Two tiers: feature-level sets (metadata + per-region feature CSVs with an
optional planted group effect) and geometry-level sets (toy label volume,
cubic-Bezier fiber bundles, smooth scalar volumes) that exercise the full
parse/bundle/sample/extract path.  Fixed seed means byte-identical output.
"""

import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .dataset import (
    FEATURES_DIR,
    load_dataset,
    region_csv_name,
    write_dataset_skeleton,
)
from .errors import BadValue
from .features.matrix import FeatureMatrix
from .features.names import feature_names
from .rng import generator
from .tract_io.model import CONTROL, DISEASE, AtlasRegion, LabelVolume, ScalarVolume, ScanRecord
from .tract_io.tck import write_tck
from .tract_io.volume import save_volume, voxel_to_world

BASELINE = date(2020, 1, 6)


def _make_records(n_subjects, visits, seed):
    rng = generator(seed, "subjects")
    records = []
    half = n_subjects // 2
    for i in range(n_subjects):
        subject = f"S{i + 1:04d}"
        group = DISEASE if i < n_subjects - half else CONTROL
        base_age = float(np.round(rng.uniform(45.0, 80.0), 1))
        # elderly women are under-represented, mirroring real PD cohorts
        p_female = 0.5 if base_age < 65.0 else 0.25
        sex = "F" if rng.random() < p_female else "M"
        for v in range(visits):
            records.append(
                ScanRecord(
                    subject_id=subject,
                    scan_id=f"{subject}V{v + 1}",
                    visit_date=BASELINE + timedelta(days=365 * v + i % 250),
                    age_at_scan=base_age + v,
                    sex=sex,
                    group_label=group,
                )
            )
    return records


def _paired_regions(n_regions):
    regions = []
    label = 1
    for p in range(n_regions // 2):
        base = f"roi{p + 1:02d}"
        regions.append({"label": label, "name": f"{base}_l",
                        "hemisphere": "L", "pair": base})
        regions.append({"label": label + 1, "name": f"{base}_r",
                        "hemisphere": "R", "pair": base})
        label += 2
    if n_regions % 2:
        regions.append({"label": label, "name": "roi_mid"})
    return regions


def synth_features(out_dir, subjects: int = 136, regions: int = 42,
                   features_per_region: int | None = None,
                   effect_regions=(), effect_features=(),
                   effect_size: float = 0.0, visits: int = 1,
                   seed: int = 0) -> dict:
    """Feature-level synthetic dataset with an optional planted effect.

    Disease rows in (effect_regions x effect_features) are shifted by
    ``effect_size`` standard deviations; everything else is unit Gaussian
    noise, so untouched regions behave as pure-noise controls.  By default
    columns carry the canonical 48 feature names; ``features_per_region``
    switches to a generic f00..fNN catalogue of that size.
    """
    root = Path(out_dir)
    region_list = _paired_regions(regions)
    known_labels = {r["label"] for r in region_list}
    bad = set(effect_regions) - known_labels
    if bad:
        raise BadValue(f"effect regions not in atlas: {sorted(bad)}")
    if features_per_region is None:
        names = feature_names()
    else:
        names = [f"f{i:02d}" for i in range(features_per_region)]
    bad = set(effect_features) - set(names)
    if bad:
        raise BadValue(f"effect features not in catalogue: {sorted(bad)}")

    records = _make_records(subjects, visits, seed)
    # name derives from the seed, not the directory: fixed seed means
    # byte-identical output wherever it lands
    write_dataset_skeleton(root, f"synth-features-s{seed}", records, region_list,
                           features_dir=FEATURES_DIR)

    features_dir = root / FEATURES_DIR
    features_dir.mkdir(exist_ok=True)
    effect_cols = [names.index(f) for f in effect_features]
    scan_ids = tuple(r.scan_id for r in records)
    subject_ids = tuple(r.subject_id for r in records)
    groups = tuple(r.group_label for r in records)
    disease_rows = np.array([g == DISEASE for g in groups])

    for region in region_list:
        label = region["label"]
        rng = generator(seed, "values", label)
        values = rng.normal(size=(len(records), len(names)))
        if label in effect_regions and effect_cols:
            for col in effect_cols:
                values[disease_rows, col] += effect_size
        matrix = FeatureMatrix(
            region=label,
            region_name=region["name"],
            feature_names=tuple(names),
            scan_ids=scan_ids,
            subject_ids=subject_ids,
            groups=groups,
            values=values,
            ok=np.ones_like(values, dtype=bool),
        )
        (features_dir / region_csv_name(label)).write_text(matrix.to_csv())

    truth = {
        "kind": "features",
        "subjects": subjects,
        "visits": visits,
        "regions": [r["label"] for r in region_list],
        "effect": {
            "regions": sorted(int(r) for r in effect_regions),
            "features": sorted(effect_features),
            "size": effect_size,
        },
        "seed": seed,
    }
    (root / "ground_truth.json").write_text(json.dumps(truth, indent=1, sort_keys=True))
    return truth


def _bezier(p0, p1, p2, p3, n_points):
    t = np.linspace(0.0, 1.0, n_points)[:, None]
    return ((1 - t) ** 3 * p0 + 3 * (1 - t) ** 2 * t * p1
            + 3 * (1 - t) * t ** 2 * p2 + t ** 3 * p3)


def _toy_label_volume(n_pairs):
    """Mirrored box regions on a coarse grid; world x = 0 is the midline."""
    dims = (24, 8 + 6 * n_pairs, 12)
    voxel = (2.0, 2.0, 2.0)
    affine = np.array(
        [
            [voxel[0], 0, 0, -voxel[0] * (dims[0] - 1) / 2.0],
            [0, voxel[1], 0, 0.0],
            [0, 0, voxel[2], 0.0],
            [0, 0, 0, 1.0],
        ]
    )
    data = np.zeros(dims, dtype=np.int32)
    atlas = []
    for p in range(n_pairs):
        y0 = 3 + 6 * p
        base = f"roi{p + 1:02d}"
        left, right = 2 * p + 1, 2 * p + 2
        data[3:8, y0:y0 + 4, 4:9] = left            # negative world x
        data[dims[0] - 8:dims[0] - 3, y0:y0 + 4, 4:9] = right
        atlas.append(AtlasRegion(left, f"{base}_l", "L", base))
        atlas.append(AtlasRegion(right, f"{base}_r", "R", base))
    return LabelVolume(
        dims=dims, voxel_size=voxel, affine=affine, data=data, atlas=tuple(atlas)
    )


def _region_centroid(volume, label):
    voxels = np.argwhere(volume.data == label)
    return voxel_to_world(volume, voxels.mean(axis=0)[None, :])[0]


def synth_geometry(out_dir, subjects: int = 12, pairs: int = 3,
                   fibers_per_bundle: int = 12, points_per_fiber: int = 16,
                   measures=("FA", "MO", "RD", "S0", "AD", "MD"),
                   effect_regions=(), effect_measures=(),
                   effect_size: float = 0.0, seed: int = 0) -> dict:
    """Geometry-level synthetic dataset: tracks, volumes, label atlas.

    Fibers are cubic-Bezier bundles linking homologue centroids (inter) and
    loops inside each region (intra), with Gaussian jitter.  Scalar volumes
    are smooth fields; disease scans get ``effect_size`` added inside the
    effect regions for the effect measures.
    """
    root = Path(out_dir)
    (root / "fibers").mkdir(parents=True, exist_ok=True)
    (root / "volumes").mkdir(exist_ok=True)

    labels = _toy_label_volume(pairs)
    save_volume(labels, root / "volumes" / "labels.json")
    centroids = {r.label: _region_centroid(labels, r.label) for r in labels.atlas}

    records = []
    for base_record in _make_records(subjects, 1, seed):
        records.append(
            ScanRecord(
                subject_id=base_record.subject_id,
                scan_id=base_record.scan_id,
                visit_date=base_record.visit_date,
                age_at_scan=base_record.age_at_scan,
                sex=base_record.sex,
                group_label=base_record.group_label,
                tracks_path=f"fibers/{base_record.scan_id}.tck",
                volume_paths={
                    m: f"volumes/{base_record.scan_id}_{m}.json" for m in measures
                },
            )
        )

    region_boxes = {
        r.label: np.argwhere(labels.data == r.label) for r in labels.atlas
    }
    for record in records:
        rng = generator(seed, "fibers", record.scan_id)
        streamlines = []
        for region in labels.atlas:
            c = centroids[region.label]
            mate = next(
                (m for m in labels.atlas
                 if m.pair == region.pair and m.label != region.label), None
            )
            # intra bundle: short loops around the centroid
            for _ in range(fibers_per_bundle):
                jitter = rng.normal(0.0, 1.0, size=(4, 3))
                p0 = c + jitter[0]
                p3 = c + jitter[1]
                streamlines.append(
                    _bezier(p0, c + jitter[2] * 2, c + jitter[3] * 2, p3,
                            points_per_fiber).astype(np.float32)
                )
            # inter bundle toward the homologue (generated once per pair)
            if mate is not None and region.hemisphere == "L":
                cm = centroids[mate.label]
                for _ in range(fibers_per_bundle):
                    jitter = rng.normal(0.0, 1.0, size=(2, 3))
                    mid = (c + cm) / 2.0
                    streamlines.append(
                        _bezier(c + jitter[0], mid + (0, 0, 6), mid - (0, 0, 6),
                                cm + jitter[1], points_per_fiber).astype(np.float32)
                    )
        (root / record.tracks_path).write_bytes(write_tck(streamlines))

        base_values = {"FA": 0.45, "MO": 0.2, "RD": 0.6, "S0": 1.0,
                       "AD": 1.2, "MD": 0.8}
        grid = np.indices(labels.dims).astype(np.float64)
        for m in measures:
            field = (
                base_values.get(m, 0.5)
                + 0.002 * grid[0] + 0.001 * grid[1] + 0.0015 * grid[2]
            )
            if record.group_label == DISEASE and m in effect_measures:
                for label in effect_regions:
                    box = region_boxes.get(label)
                    if box is not None:
                        field[box[:, 0], box[:, 1], box[:, 2]] += effect_size
            noise = generator(seed, "field", record.scan_id, m).normal(
                0.0, 0.01, size=labels.dims
            )
            volume = ScalarVolume(
                dims=labels.dims,
                voxel_size=labels.voxel_size,
                affine=labels.affine,
                data=field + noise,
                measure_name=m,
            )
            save_volume(volume, root / record.volume_paths[m])

    regions = [
        {
            "label": r.label,
            "name": r.name,
            **({"hemisphere": r.hemisphere} if r.hemisphere else {}),
            **({"pair": r.pair} if r.pair else {}),
        }
        for r in labels.atlas
    ]
    write_dataset_skeleton(
        root, f"synth-geometry-s{seed}", records, regions,
        measures=measures, label_volume="volumes/labels.json",
    )
    truth = {
        "kind": "geometry",
        "subjects": subjects,
        "pairs": pairs,
        "effect": {
            "regions": sorted(int(r) for r in effect_regions),
            "measures": sorted(effect_measures),
            "size": effect_size,
        },
        "seed": seed,
    }
    (root / "ground_truth.json").write_text(json.dumps(truth, indent=1, sort_keys=True))
    return truth


def load_synth(out_dir):
    return load_dataset(out_dir)
