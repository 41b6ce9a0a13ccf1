"""On-disk dataset layout.

A dataset directory holds::

    manifest.json     name, region list, pointers to the files below
    metadata.csv      one row per scan (demographics + file references)
    features/         per-region feature CSVs (region_<label>.csv)
    volumes/, fibers/ raw geometry (optional; present on extract-able sets)

Feature CSVs are the substrate the ML pipeline runs on; geometry-backed
datasets produce them via ``extract``.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedHeader, MissingVolume, UnknownRegion, UnknownScan
from .features.extract import build_feature_matrices, load_scan_data
from .features.matrix import FeatureMatrix
from .features.names import DEFAULT_MEASURES
from .tract_io.metadata import dump_metadata, load_metadata
from .tract_io.volume import load_volume

MANIFEST = "manifest.json"
METADATA = "metadata.csv"
FEATURES_DIR = "features"


def region_csv_name(label: int) -> str:
    return f"region_{int(label):03d}.csv"


@dataclass
class Dataset:
    root: Path
    name: str
    records: list
    regions: list                      # dicts: label, name, hemisphere?, pair?
    features_dir: str | None = None
    label_volume_path: str | None = None
    measures: tuple = DEFAULT_MEASURES
    _matrices: dict = field(default_factory=dict, repr=False)

    @property
    def records_by_scan(self) -> dict:
        return {r.scan_id: r for r in self.records}

    @property
    def region_labels(self) -> list:
        return sorted(r["label"] for r in self.regions)

    def region_name(self, label: int) -> str:
        for r in self.regions:
            if r["label"] == label:
                return r["name"]
        raise UnknownRegion(f"region {label} not in dataset {self.name!r}")

    def record(self, scan_id: str):
        rec = self.records_by_scan.get(scan_id)
        if rec is None:
            raise UnknownScan(f"scan {scan_id} not in dataset {self.name!r}")
        return rec

    def has_features(self) -> bool:
        return self.features_dir is not None and (
            self.root / self.features_dir
        ).is_dir()

    def matrices(self, features_dir: str | None = None) -> dict:
        """label -> FeatureMatrix, loaded from the per-region CSV files."""
        key = features_dir or self.features_dir
        if key is None:
            raise MissingVolume(
                f"dataset {self.name!r} has no extracted features; run extract"
            )
        if key not in self._matrices:
            base = self.root / key
            out = {}
            for region in self.regions:
                label = region["label"]
                path = base / region_csv_name(label)
                if not path.is_file():
                    raise MissingVolume(f"missing feature file {path}")
                out[label] = FeatureMatrix.from_csv(
                    path.read_text(), region=label, region_name=region["name"]
                )
            self._matrices[key] = out
        return self._matrices[key]

    def label_volume(self):
        if not self.label_volume_path:
            raise MissingVolume(f"dataset {self.name!r} has no label volume")
        return load_volume(self.root / self.label_volume_path)

    def fingerprint(self) -> str:
        """Content hash over manifest, metadata, and feature CSVs."""
        h = hashlib.sha256()
        for rel in self._inventory():
            path = self.root / rel
            h.update(rel.encode())
            h.update(b"\x00")
            h.update(path.read_bytes())
            h.update(b"\x01")
        return h.hexdigest()

    def _inventory(self) -> list:
        names = [MANIFEST, METADATA]
        if self.has_features():
            base = self.root / self.features_dir
            names += sorted(
                str(p.relative_to(self.root)) for p in base.glob("*.csv")
            )
        return names


def load_dataset(path) -> Dataset:
    root = Path(path)
    manifest_path = root / MANIFEST
    if not manifest_path.is_file():
        raise MalformedHeader(f"{root} has no {MANIFEST}")
    doc = json.loads(manifest_path.read_text())
    records = load_metadata((root / doc.get("metadata", METADATA)).read_bytes())
    return Dataset(
        root=root,
        name=doc.get("name", root.name),
        records=records,
        regions=[
            {
                "label": int(r["label"]),
                "name": str(r["name"]),
                **({"hemisphere": r["hemisphere"]} if r.get("hemisphere") else {}),
                **({"pair": r["pair"]} if r.get("pair") else {}),
            }
            for r in doc.get("regions", [])
        ],
        features_dir=doc.get("features_dir"),
        label_volume_path=doc.get("label_volume"),
        measures=tuple(doc.get("measures", DEFAULT_MEASURES)),
    )


def write_manifest(root: Path, name: str, regions, features_dir=None,
                   label_volume=None, measures=DEFAULT_MEASURES):
    doc = {
        "name": name,
        "metadata": METADATA,
        "regions": regions,
        "measures": list(measures),
    }
    if features_dir:
        doc["features_dir"] = features_dir
    if label_volume:
        doc["label_volume"] = label_volume
    (root / MANIFEST).write_text(json.dumps(doc, indent=1, sort_keys=True))


def extract_features(dataset: Dataset, out_dir: str = FEATURES_DIR,
                     fiber_weighted: bool = False) -> dict:
    """Parse geometry, compute per-region matrices, and write feature CSVs."""
    label_volume = dataset.label_volume()
    scans = [
        load_scan_data(record, dataset.root, label_volume, dataset.measures)
        for record in sorted(dataset.records, key=lambda r: r.scan_id)
    ]
    matrices = build_feature_matrices(
        scans, label_volume, dataset.measures, fiber_weighted=fiber_weighted
    )
    write_feature_csvs(dataset.root / out_dir, matrices)

    regions = [
        {
            "label": r.label,
            "name": r.name,
            **({"hemisphere": r.hemisphere} if r.hemisphere else {}),
            **({"pair": r.pair} if r.pair else {}),
        }
        for r in label_volume.atlas
    ]
    write_manifest(
        dataset.root, dataset.name, regions,
        features_dir=out_dir, label_volume=dataset.label_volume_path,
        measures=dataset.measures,
    )
    dataset.regions = regions
    dataset.features_dir = out_dir
    dataset._matrices.clear()
    return matrices


def write_feature_csvs(directory: Path, matrices: dict):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for label, matrix in matrices.items():
        (directory / region_csv_name(label)).write_text(matrix.to_csv())


def write_dataset_skeleton(root: Path, name: str, records, regions,
                           measures=DEFAULT_MEASURES, **manifest_extra):
    root.mkdir(parents=True, exist_ok=True)
    (root / METADATA).write_text(dump_metadata(records))
    write_manifest(root, name, regions, measures=measures, **manifest_extra)
