"""Streamline-to-region assignment and hemisphere bookkeeping.

Assignment is endpoint-based: each end of a fiber gets the atlas label of
its nearest voxel; endpoints landing on background are rescued from the
26-neighborhood (nearest nonzero label by world distance, ties to the lower
label).  Fibers with an unlabeled endpoint are tagged UNASSIGNED and skipped
by feature extraction.
"""

import re

import numpy as np

from .model import (
    CROSS,
    INTER,
    INTRA,
    LEFT,
    RIGHT,
    UNASSIGNED_BUNDLE,
    BundleAssignment,
    LabelVolume,
)
from .volume import voxel_to_world, world_to_voxel

_OFFSETS = np.array(
    [
        (dx, dy, dz)
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
        if (dx, dy, dz) != (0, 0, 0)
    ],
    dtype=np.int64,
)

_HEMI_AFFIX = re.compile(
    r"^(?:l|r|left|right|lh|rh)[._-]|[._-](?:l|r|left|right|lh|rh)$",
    re.IGNORECASE,
)


def pair_base_name(region) -> str:
    """Base name shared by a left/right homologue pair."""
    if region.pair:
        return region.pair
    return _HEMI_AFFIX.sub("", region.name)


def region_hemispheres(volume: LabelVolume) -> dict:
    """Per-label hemisphere: explicit atlas tag wins, else sign of the
    world-space x coordinate of the region centroid (negative = left)."""
    out = {}
    for region in volume.atlas:
        if region.hemisphere in ("L", "R"):
            out[region.label] = region.hemisphere
            continue
        voxels = np.argwhere(volume.data == region.label)
        if voxels.size == 0:
            out[region.label] = None
            continue
        centroid = voxel_to_world(volume, voxels.mean(axis=0)[None, :])[0]
        if abs(centroid[0]) < 1e-9:
            out[region.label] = None
        else:
            out[region.label] = "L" if centroid[0] < 0 else "R"
    return out


def homologue_pairs(volume: LabelVolume, hemispheres: dict | None = None) -> dict:
    """label -> contralateral label for regions forming an L/R pair."""
    hemispheres = hemispheres or region_hemispheres(volume)
    by_base: dict = {}
    for region in volume.atlas:
        hemi = hemispheres.get(region.label)
        if hemi not in ("L", "R"):
            continue
        by_base.setdefault(pair_base_name(region), {})[hemi] = region.label
    pairs = {}
    for sides in by_base.values():
        if "L" in sides and "R" in sides:
            pairs[sides["L"]] = sides["R"]
            pairs[sides["R"]] = sides["L"]
    return pairs


def _endpoint_label(volume: LabelVolume, point: np.ndarray) -> int:
    """Atlas label at a world position, with 26-neighborhood rescue."""
    dims = np.asarray(volume.dims)
    vox = world_to_voxel(volume, point[None, :])[0]
    nearest = np.rint(vox).astype(np.int64)
    if ((nearest >= 0) & (nearest < dims)).all():
        label = int(volume.data[nearest[0], nearest[1], nearest[2]])
        if label != 0:
            return label
    neighbors = nearest + _OFFSETS
    valid = ((neighbors >= 0) & (neighbors < dims)).all(axis=1)
    neighbors = neighbors[valid]
    if neighbors.size == 0:
        return 0
    labels = volume.data[neighbors[:, 0], neighbors[:, 1], neighbors[:, 2]]
    nonzero = labels != 0
    if not nonzero.any():
        return 0
    neighbors = neighbors[nonzero]
    labels = labels[nonzero]
    centers = voxel_to_world(volume, neighbors.astype(np.float64))
    dist = np.linalg.norm(centers - point, axis=1)
    # nearest wins; ties broken by lower label for order-independence
    order = np.lexsort((labels, dist))
    return int(labels[order[0]])


def assign_bundles(streamlines, volume: LabelVolume) -> list[BundleAssignment]:
    """One BundleAssignment per streamline, in input order."""
    hemispheres = region_hemispheres(volume)
    out = []
    for s in streamlines:
        pts = np.asarray(s, dtype=np.float64)
        start = _endpoint_label(volume, pts[0])
        end = _endpoint_label(volume, pts[-1])
        if start == 0 or end == 0:
            out.append(UNASSIGNED_BUNDLE)
            continue
        connection = INTRA if start == end else INTER
        h_start = hemispheres.get(start)
        h_end = hemispheres.get(end)
        if h_start == "L" and h_end == "L":
            hemi = LEFT
        elif h_start == "R" and h_end == "R":
            hemi = RIGHT
        else:
            hemi = CROSS
        out.append(BundleAssignment(start, end, connection, hemi))
    return out
