"""Derived comparative-analysis products for the UI."""

from .louvain import louvain_communities, modularity
from .ordered_matrix import (
    EDGE_THRESHOLD,
    OrderedMatrix,
    community_order,
    correlation_from_rows,
    ordered_matrix,
)
from .tsne import conditional_affinities, project_2d
from .views import (
    HISTOGRAM_BINS,
    histogram,
    prediction_feature_points,
    subject_timeline,
    trend_series,
)

__all__ = [
    "EDGE_THRESHOLD",
    "HISTOGRAM_BINS",
    "OrderedMatrix",
    "community_order",
    "conditional_affinities",
    "correlation_from_rows",
    "histogram",
    "louvain_communities",
    "modularity",
    "ordered_matrix",
    "prediction_feature_points",
    "project_2d",
    "subject_timeline",
    "trend_series",
]
