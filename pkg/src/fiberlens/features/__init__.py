"""Feature extraction and the per-region feature matrix."""

from .extract import (
    ScanData,
    asymmetry,
    build_feature_matrices,
    bundle_indices,
    load_scan_data,
    polyline_length,
    region_base_features,
    tensor_mean,
    tract_features,
)
from .matrix import FeatureMatrix
from .names import (
    ASYM_PREFIX,
    DEFAULT_MEASURES,
    SCOPES,
    base_feature_names,
    feature_names,
    measure_feature,
    split_feature,
)

__all__ = [
    "ASYM_PREFIX",
    "DEFAULT_MEASURES",
    "FeatureMatrix",
    "SCOPES",
    "ScanData",
    "asymmetry",
    "base_feature_names",
    "build_feature_matrices",
    "bundle_indices",
    "feature_names",
    "load_scan_data",
    "measure_feature",
    "polyline_length",
    "region_base_features",
    "split_feature",
    "tensor_mean",
    "tract_features",
]
