"""Exact t-SNE for small cohorts (no tree approximation).

Affinities use per-point bandwidth calibration by binary search against a
target perplexity of min(30, (rows-1)/3).  The 2-D embedding starts from the
first two principal components scaled to std 1e-4 and runs 1000 plain
momentum gradient-descent steps: x12 early exaggeration for the first 250,
momentum 0.5 then 0.8, learning rate max(50, rows/12).  Deterministic for a
fixed seed.
"""

import numpy as np

from ..errors import TooFewRows
from ..rng import generator

EPS = 1e-12
N_ITER = 1000
EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
MOMENTUM_SWITCH = 250


def conditional_affinities(sq_dists: np.ndarray, perplexity: float) -> np.ndarray:
    """Row-stochastic conditional affinities P(j|i) at the target perplexity."""
    n = sq_dists.shape[0]
    target_entropy = np.log(perplexity)
    P = np.zeros((n, n))
    for i in range(n):
        beta_lo, beta_hi = 0.0, np.inf
        beta = 1.0
        row = sq_dists[i].copy()
        row[i] = np.inf  # excludes self from the distribution
        for _ in range(64):
            p = np.exp(-row * beta)
            total = p.sum()
            if total <= 0:
                entropy = 0.0
                p = np.zeros_like(p)
            else:
                p /= total
                nz = p > 0
                entropy = float(-(p[nz] * np.log(p[nz])).sum())
            if abs(entropy - target_entropy) < 1e-7:
                break
            if entropy > target_entropy:
                beta_lo = beta
                beta = beta * 2.0 if beta_hi == np.inf else (beta + beta_hi) / 2.0
            else:
                beta_hi = beta
                beta = beta / 2.0 if beta_lo == 0.0 else (beta + beta_lo) / 2.0
        P[i] = p
    return P


def _pca_init(X: np.ndarray, seed: int) -> np.ndarray:
    centered = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:2]
    # deterministic sign: largest-|loading| entry of each component positive
    for r in range(comps.shape[0]):
        j = int(np.argmax(np.abs(comps[r])))
        if comps[r, j] < 0:
            comps[r] = -comps[r]
    emb = centered @ comps.T
    if emb.shape[1] < 2:
        emb = np.hstack([emb, np.zeros((emb.shape[0], 2 - emb.shape[1]))])
    lead_std = emb[:, 0].std()
    if lead_std > 0:
        return emb / lead_std * 1e-4
    return generator(seed, "tsne-init").normal(0.0, 1e-4, size=(X.shape[0], 2))


def project_2d(X, seed: int = 0, perplexity: float | None = None,
               n_iter: int = N_ITER) -> np.ndarray:
    """Embed standardized rows into 2-D; one output row per input row."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 5:
        raise TooFewRows(f"projection needs >= 5 rows, got {n}")
    if perplexity is None:
        perplexity = min(30.0, (n - 1) / 3.0)

    sq = np.sum(X * X, axis=1)
    sq_dists = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (X @ X.T), 0.0)
    cond = conditional_affinities(sq_dists, perplexity)
    P = (cond + cond.T) / (2.0 * n)
    P = np.maximum(P, EPS)

    Y = _pca_init(X, seed)
    update = np.zeros_like(Y)
    lr = max(50.0, n / 12.0)

    P_run = P * EXAGGERATION
    for it in range(n_iter):
        if it == EXAGGERATION_ITERS:
            P_run = P
        momentum = 0.5 if it < MOMENTUM_SWITCH else 0.8

        diff = Y[:, None, :] - Y[None, :, :]
        dist2 = np.sum(diff * diff, axis=2)
        qnum = 1.0 / (1.0 + dist2)
        np.fill_diagonal(qnum, 0.0)
        Q = np.maximum(qnum / max(qnum.sum(), EPS), EPS)

        weight = (P_run - Q) * qnum
        grad = 4.0 * np.einsum("ij,ijk->ik", weight, diff)

        update = momentum * update - lr * grad
        Y = Y + update
        Y = Y - Y.mean(axis=0)
    return Y
