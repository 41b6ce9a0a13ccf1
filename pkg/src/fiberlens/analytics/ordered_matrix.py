"""Covariance/correlation matrices ordered by correlation communities.

The permutation is always derived from the correlation graph (absolute
correlations at or above the edge threshold), so the covariance view, the
correlation view, and the parallel-coordinates axis order all share one
ordering.  Communities are sorted by size (descending), and features within
a community by their mean absolute correlation to the rest of it.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import TooFewRows
from ..features.matrix import FeatureMatrix
from .louvain import louvain_communities

EDGE_THRESHOLD = 0.1


@dataclass
class OrderedMatrix:
    feature_names: tuple         # permuted order
    order: tuple                 # permutation into the input feature list
    cells: np.ndarray            # permuted (covariance or correlation)
    mode: str
    communities: dict            # feature name -> community id
    modularity: tuple            # per-pass history

    def to_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "order": [int(i) for i in self.order],
            "cells": [[float(v) for v in row] for row in self.cells],
            "mode": self.mode,
            "communities": {k: int(v) for k, v in self.communities.items()},
        }


def correlation_from_rows(rows: np.ndarray) -> np.ndarray:
    """Pearson correlations with zero-variance features mapped to 0 (diag 1)."""
    std = rows.std(axis=0)
    safe = np.where(std > 0, std, 1.0)
    centered = (rows - rows.mean(axis=0)) / safe
    corr = centered.T @ centered / rows.shape[0]
    corr[std == 0, :] = 0.0
    corr[:, std == 0] = 0.0
    np.fill_diagonal(corr, 1.0)
    return np.clip(corr, -1.0, 1.0)


def ordered_matrix(matrix: FeatureMatrix, group: str | None = None,
                   mode: str = "covariance", top_features=None,
                   edge_threshold: float = EDGE_THRESHOLD) -> OrderedMatrix:
    """Pairwise statistics over the (optionally group-filtered) rows."""
    if mode not in ("covariance", "correlation"):
        raise ValueError(f"mode must be covariance or correlation, got {mode!r}")
    names = list(top_features) if top_features else list(matrix.feature_names)
    cols = [matrix.feature_index(n) for n in names]

    keep = np.ones(matrix.n_rows, dtype=bool)
    if group is not None:
        keep &= matrix.group_rows(group)
    # complete-case rows: flagged cells carry no value
    keep &= matrix.ok[:, cols].all(axis=1)
    rows = matrix.values[np.flatnonzero(keep)][:, cols]
    if rows.shape[0] < 2:
        raise TooFewRows(
            f"need >= 2 rows after filtering, have {rows.shape[0]}"
        )

    corr = correlation_from_rows(rows)
    weights = np.abs(corr).copy()
    np.fill_diagonal(weights, 0.0)
    weights[weights < edge_threshold] = 0.0
    communities, history = louvain_communities(weights)

    order = community_order(corr, communities)
    if mode == "correlation":
        cells = corr
    else:
        cells = np.cov(rows, rowvar=False, ddof=1)
        cells = np.atleast_2d(cells)
    permuted = cells[np.ix_(order, order)]
    return OrderedMatrix(
        feature_names=tuple(names[i] for i in order),
        order=tuple(int(i) for i in order),
        cells=permuted,
        mode=mode,
        communities={names[i]: int(communities[i]) for i in range(len(names))},
        modularity=tuple(history),
    )


def community_order(corr: np.ndarray, communities: np.ndarray) -> list:
    """Permutation grouping communities contiguously.

    Communities sort by size descending (ties: smallest member index);
    members sort by mean |corr| to the rest of their community, descending
    (ties: original index).  Singletons get centrality 0.
    """
    n = corr.shape[0]
    groups: dict = {}
    for i in range(n):
        groups.setdefault(int(communities[i]), []).append(i)
    ordered_groups = sorted(
        groups.values(), key=lambda members: (-len(members), min(members))
    )
    order: list = []
    for members in ordered_groups:
        if len(members) == 1:
            order.extend(members)
            continue
        centrality = {
            i: float(np.mean([abs(corr[i, j]) for j in members if j != i]))
            for i in members
        }
        order.extend(sorted(members, key=lambda i: (-centrality[i], i)))
    return order
