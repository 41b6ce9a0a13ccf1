"""Parsers and data model for streamlines, volumes, and cohort metadata."""

from .bundles import assign_bundles, homologue_pairs, pair_base_name, region_hemispheres
from .metadata import dump_metadata, load_metadata
from .model import (
    CONTROL,
    CROSS,
    DISEASE,
    GROUPS,
    INTER,
    INTRA,
    LEFT,
    RIGHT,
    UNASSIGNED,
    UNASSIGNED_BUNDLE,
    AtlasRegion,
    BundleAssignment,
    LabelVolume,
    ScalarVolume,
    ScanRecord,
)
from .tck import parse_tck, write_tck
from .volume import (
    load_volume,
    parse_volume,
    sample_along,
    sample_trilinear,
    save_volume,
    voxel_to_world,
    world_to_voxel,
)

__all__ = [
    "AtlasRegion",
    "BundleAssignment",
    "LabelVolume",
    "ScalarVolume",
    "ScanRecord",
    "CONTROL",
    "CROSS",
    "DISEASE",
    "GROUPS",
    "INTER",
    "INTRA",
    "LEFT",
    "RIGHT",
    "UNASSIGNED",
    "UNASSIGNED_BUNDLE",
    "assign_bundles",
    "dump_metadata",
    "homologue_pairs",
    "load_metadata",
    "load_volume",
    "pair_base_name",
    "parse_tck",
    "parse_volume",
    "region_hemispheres",
    "sample_along",
    "sample_trilinear",
    "save_volume",
    "voxel_to_world",
    "world_to_voxel",
    "write_tck",
]
