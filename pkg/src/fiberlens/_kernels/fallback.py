"""Pure-numpy implementations of the hot kernels.

This module is the reference semantics for `_ext.pyx`.  The tree kernel
consumes randomness through the shared SplitMix64 generator in exactly the
same draw order as the compiled version, so both produce bitwise-identical
importance vectors for the same seed.  Keep the two in lockstep when editing.
"""

import numpy as np

from ..rng import MASK64, SplitMix64

GOLDEN = 0x9E3779B97F4A7C15


def _gini(size: float, ones: float) -> float:
    p1 = ones / size
    p0 = (size - ones) / size
    return 1.0 - p1 * p1 - p0 * p0


def tree_importance_raw(X, y, n_trees, n_candidates, seed):
    """Unnormalized impurity-decrease importance from an extra-trees ensemble.

    Trees are fully randomized: at each node up to ``n_candidates``
    non-constant features are drawn without replacement, each gets one
    uniform threshold between its node-local min and max, and the split with
    the largest Gini decrease wins.  Nodes are grown until pure or
    unsplittable.  The caller normalizes the returned vector.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    n, f = X.shape
    imp = np.zeros(f, dtype=np.float64)
    idx = np.empty(n, dtype=np.int64)
    base_pool = np.arange(f, dtype=np.int64)
    for t in range(n_trees):
        rng = SplitMix64((seed + t * GOLDEN) & MASK64)
        _grow_tree(X, y, idx, base_pool, n_candidates, rng, imp)
    return imp


def _grow_tree(X, y, idx, base_pool, n_candidates, rng, imp):
    n, f = X.shape
    idx[:] = np.arange(n)
    root_ones = int(y.sum())
    # LIFO stack of (start, end, ones); left child pushed last so it pops first
    stack = [(0, n, root_ones)]
    while stack:
        start, end, ones = stack.pop()
        size = end - start
        if size < 2 or ones == 0 or ones == size:
            continue
        node = idx[start:end]
        y_node = y[node]
        g_node = _gini(size, ones)

        pool = base_pool.copy()
        i = 0
        evaluated = 0
        best_dec = -1.0
        best_feat = -1
        best_thr = 0.0
        best_mask = None
        best_nl = 0
        best_ol = 0
        while i < f and evaluated < n_candidates:
            j = i + rng.next_below(f - i)
            pool[i], pool[j] = pool[j], pool[i]
            feat = int(pool[i])
            i += 1
            col = X[node, feat]
            lo = col.min()
            hi = col.max()
            if lo == hi:
                continue  # constant in this node: not a candidate
            evaluated += 1
            thr = lo + rng.next_double() * (hi - lo)
            if thr >= hi:  # rounding guard: both sides must stay non-empty
                thr = lo
            mask = col <= thr
            nl = int(np.count_nonzero(mask))
            ol = int(y_node[mask].sum())
            nr = size - nl
            o_r = ones - ol
            dec = size * g_node - nl * _gini(nl, ol) - nr * _gini(nr, o_r)
            if dec > best_dec:
                best_dec = dec
                best_feat = feat
                best_thr = thr
                best_mask = mask
                best_nl = nl
                best_ol = ol
        if best_feat < 0:
            continue  # every feature constant in this node
        imp[best_feat] += best_dec / n
        left = node[best_mask]
        right = node[~best_mask]
        idx[start:start + best_nl] = left
        idx[start + best_nl:end] = right
        stack.append((start + best_nl, end, ones - best_ol))
        stack.append((start, start + best_nl, best_ol))


def svm_dual_cd(X, y, C, tol, max_passes):
    """Soft-margin linear SVM via dual coordinate descent (hinge loss + L2).

    Deterministic: coordinates are visited cyclically in row order.  Stops
    when the duality gap drops below ``tol * max(1, |primal|)``.

    Returns ``(w, passes, gap, converged)``; the caller owns any bias
    augmentation.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, d = X.shape
    w = np.zeros(d, dtype=np.float64)
    alpha = np.zeros(n, dtype=np.float64)
    qii = np.einsum("ij,ij->i", X, X)
    passes = 0
    gap = np.inf
    converged = False
    while passes < max_passes:
        for i in range(n):
            q = qii[i]
            if q <= 0.0:
                continue
            g = y[i] * float(w @ X[i]) - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = min(g, 0.0)
            elif a == C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg != 0.0:
                a_new = min(max(a - g / q, 0.0), C)
                delta = a_new - a
                if delta != 0.0:
                    alpha[i] = a_new
                    w += (delta * y[i]) * X[i]
        passes += 1
        margins = 1.0 - y * (X @ w)
        wsq = float(w @ w)
        primal = 0.5 * wsq + C * float(np.maximum(margins, 0.0).sum())
        dual = float(alpha.sum()) - 0.5 * wsq
        gap = primal - dual
        if gap <= tol * max(1.0, abs(primal)):
            converged = True
            break
    return w, passes, gap, converged
