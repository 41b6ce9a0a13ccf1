"""Louvain community detection on a weighted undirected graph.

Standard two-phase scheme: greedy local moves in a fixed node-visit order
until no move improves modularity by more than the gain threshold, then
aggregation of communities into super-nodes, repeated until a full pass
yields no gain.  Fully deterministic for a fixed input matrix.
"""

import numpy as np

GAIN_EPS = 1e-9


def modularity(weights: np.ndarray, communities: np.ndarray) -> float:
    """Newman modularity of a partition over a symmetric weight matrix."""
    W = np.asarray(weights, dtype=np.float64)
    comm = np.asarray(communities)
    m2 = float(W.sum())
    if m2 <= 0:
        return 0.0
    degrees = W.sum(axis=1)
    q = 0.0
    for c in np.unique(comm):
        members = comm == c
        internal = float(W[np.ix_(members, members)].sum())
        total = float(degrees[members].sum())
        q += internal / m2 - (total / m2) ** 2
    return q


def _local_phase(W: np.ndarray) -> np.ndarray:
    """Greedy node moves to the neighboring community with the best gain."""
    n = W.shape[0]
    degrees = W.sum(axis=1)
    m2 = float(W.sum())
    comm = np.arange(n)
    sigma_tot = degrees.copy()

    if m2 <= 0:
        return comm

    improved = True
    while improved:
        improved = False
        for i in range(n):
            ci = comm[i]
            ki = degrees[i]
            # link weight from i to each community (self-weight excluded)
            links: dict = {}
            for j in range(n):
                w = W[i, j]
                if w != 0.0 and j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            sigma_tot[ci] -= ki
            stay_gain = links.get(ci, 0.0) - sigma_tot[ci] * ki / m2
            best_c, best_gain = ci, stay_gain
            for c in sorted(links):
                if c == ci:
                    continue
                gain = links[c] - sigma_tot[c] * ki / m2
                if gain > best_gain + GAIN_EPS:
                    best_c, best_gain = c, gain
            sigma_tot[best_c] += ki
            if best_c != ci:
                comm[i] = best_c
                improved = True
    return comm


def _relabel(comm: np.ndarray) -> np.ndarray:
    """Compact community ids in order of first appearance."""
    mapping: dict = {}
    out = np.empty_like(comm)
    for i, c in enumerate(comm):
        if c not in mapping:
            mapping[c] = len(mapping)
        out[i] = mapping[c]
    return out


def _aggregate(W: np.ndarray, comm: np.ndarray) -> np.ndarray:
    k = int(comm.max()) + 1
    agg = np.zeros((k, k))
    for a in range(k):
        rows = comm == a
        for b in range(k):
            agg[a, b] = float(W[np.ix_(rows, comm == b)].sum())
    return agg


def louvain_communities(weights: np.ndarray):
    """Partition nodes of a symmetric non-negative weight matrix.

    Returns ``(communities, modularity_per_pass)`` where communities maps
    each original node to a compact community id and the modularity history
    is non-decreasing by construction.
    """
    W = np.asarray(weights, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("weight matrix must be square")
    n = W.shape[0]
    node_comm = np.arange(n)

    history: list = []
    level = W.copy()
    while True:
        local = _relabel(_local_phase(level))
        node_comm = local[node_comm]
        q = modularity(W, node_comm)
        if history and q <= history[-1] + GAIN_EPS:
            history.append(q)
            break
        history.append(q)
        if int(local.max()) + 1 == level.shape[0]:
            break  # no merge happened; aggregation would be a no-op
        level = _aggregate(level, local)
    return _relabel(node_comm), history
