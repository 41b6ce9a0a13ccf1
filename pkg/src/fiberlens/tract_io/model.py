"""Core data model for ingested tract data.

Streamlines are plain ``(n, 3)`` float32 arrays in scanner millimeters; the
parsers guarantee ``n >= 2`` and finite coordinates, so downstream code never
re-checks.  Volumes are immutable-by-convention dataclasses whose ``data``
arrays must not be mutated after construction (everything here is shared
read-only across worker threads).
"""

from dataclasses import dataclass, field
from datetime import date

import numpy as np

from ..errors import BadAffine, BadValue, SizeMismatch

DISEASE = "DISEASE"
CONTROL = "CONTROL"
GROUPS = (DISEASE, CONTROL)

INTRA = "INTRA"
INTER = "INTER"
UNASSIGNED = "UNASSIGNED"

LEFT = "LEFT"
RIGHT = "RIGHT"
CROSS = "CROSS"


@dataclass(frozen=True)
class AtlasRegion:
    label: int
    name: str
    hemisphere: str | None = None  # "L" / "R", explicit override
    pair: str | None = None        # base name shared with the homologue


def _check_grid(dims, voxel_size, affine, data, itemcount):
    if len(dims) != 3 or any(int(d) <= 0 for d in dims):
        raise BadValue(f"dims must be 3 positive integers, got {dims!r}")
    if len(voxel_size) != 3 or any(float(v) <= 0 for v in voxel_size):
        raise BadValue(f"voxel_size must be 3 positive reals, got {voxel_size!r}")
    if affine.shape != (4, 4):
        raise BadAffine(f"affine must be 4x4, got {affine.shape}")
    det = float(np.linalg.det(affine[:3, :3]))
    if not np.isfinite(det) or det == 0.0:
        raise BadAffine("affine upper-left 3x3 block is singular")
    expected = int(dims[0]) * int(dims[1]) * int(dims[2])
    if itemcount != expected:
        raise SizeMismatch(
            f"raw stream holds {itemcount} elements, dims require {expected}"
        )


@dataclass(frozen=True)
class ScalarVolume:
    dims: tuple[int, int, int]
    voxel_size: tuple[float, float, float]
    affine: np.ndarray          # 4x4, voxel index -> world mm
    data: np.ndarray            # shape dims, x-fastest storage
    measure_name: str

    def __post_init__(self):
        _check_grid(self.dims, self.voxel_size, self.affine, self.data,
                    self.data.size)


@dataclass(frozen=True)
class LabelVolume:
    dims: tuple[int, int, int]
    voxel_size: tuple[float, float, float]
    affine: np.ndarray
    data: np.ndarray            # integer labels, 0 = background
    atlas: tuple[AtlasRegion, ...]

    def __post_init__(self):
        _check_grid(self.dims, self.voxel_size, self.affine, self.data,
                    self.data.size)
        if self.data.min() < 0:
            raise BadValue("label volume contains negative labels")
        known = {r.label for r in self.atlas}
        present = set(np.unique(self.data).tolist()) - {0}
        missing = sorted(present - known)
        if missing:
            raise BadValue(f"labels missing from atlas: {missing}")

    def region(self, label: int) -> AtlasRegion:
        for r in self.atlas:
            if r.label == label:
                return r
        raise KeyError(label)


@dataclass(frozen=True)
class ScanRecord:
    subject_id: str
    scan_id: str
    visit_date: date
    age_at_scan: float
    sex: str                    # "M" / "F"
    group_label: str            # DISEASE / CONTROL
    tracks_path: str | None = None
    volume_paths: dict = field(default_factory=dict)  # measure -> descriptor path

    def __post_init__(self):
        if self.age_at_scan <= 0:
            raise BadValue(f"age_at_scan must be positive, got {self.age_at_scan}")
        if self.sex not in ("M", "F"):
            raise BadValue(f"sex must be M or F, got {self.sex!r}")
        if self.group_label not in GROUPS:
            raise BadValue(f"unknown group label {self.group_label!r}")


@dataclass(frozen=True)
class BundleAssignment:
    start_region: int
    end_region: int
    connection_class: str       # INTRA / INTER / UNASSIGNED
    hemisphere: str | None      # LEFT / RIGHT / CROSS, None when UNASSIGNED

    @property
    def assigned(self) -> bool:
        return self.connection_class != UNASSIGNED

    def touches(self, label: int) -> bool:
        return self.assigned and (self.start_region == label or self.end_region == label)


UNASSIGNED_BUNDLE = BundleAssignment(0, 0, UNASSIGNED, None)
