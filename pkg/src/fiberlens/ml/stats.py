"""Mann-Whitney U test with midranks, exact small-sample p, tie-corrected
normal approximation with continuity correction."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadValue

EXACT_LIMIT = 16  # combined size at or below which the exact path is used


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float            # U statistic of the first sample
    u_other: float
    p: float            # two-sided
    method: str         # "exact" / "normal"


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_counts(n_a: int, n_b: int) -> np.ndarray:
    """counts[u] = number of tie-free arrangements with U_A = u."""
    # rolling DP over the standard recurrence
    # N(m, n, u) = N(m-1, n, u - n) + N(m, n-1, u)
    max_u = n_a * n_b
    table = np.zeros((n_b + 1, max_u + 1), dtype=np.float64)
    table[:, 0] = 1.0  # m = 0 row: only u = 0
    for m in range(1, n_a + 1):
        new = np.zeros_like(table)
        new[0, 0] = 1.0
        for n in range(1, n_b + 1):
            new[n] = new[n - 1]
            new[n, n:] += table[n, : max_u + 1 - n]
        table = new
    return table[n_b]


def mann_whitney_u(group_a, group_b, method: str = "auto") -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    ``method``: "auto" picks the exact distribution when the combined size is
    at most 16 and there are no ties, else the normal approximation; "exact"
    and "normal" force a path (exact refuses ties).
    All-identical data degenerates to p = 1.0.
    """
    a = np.asarray(group_a, dtype=np.float64)
    b = np.asarray(group_b, dtype=np.float64)
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise BadValue("both groups must be non-empty")

    combined = np.concatenate([a, b])
    ranks = _midranks(combined)
    r_a = float(ranks[:n_a].sum())
    u_a = r_a - n_a * (n_a + 1) / 2.0
    u_b = n_a * n_b - u_a

    _, tie_counts = np.unique(combined, return_counts=True)
    has_ties = bool((tie_counts > 1).any())

    if method == "exact" or (method == "auto"
                             and n_a + n_b <= EXACT_LIMIT and not has_ties):
        if has_ties:
            raise BadValue("exact method is undefined under ties")
        counts = _exact_counts(n_a, n_b)
        total = counts.sum()
        u_lo = int(round(min(u_a, u_b)))
        u_hi = n_a * n_b - u_lo
        p = (counts[: u_lo + 1].sum() + counts[u_hi:].sum()) / total
        return MannWhitneyResult(u_a, u_b, min(1.0, float(p)), "exact")

    n = n_a + n_b
    mean = n_a * n_b / 2.0
    tie_term = float(((tie_counts ** 3) - tie_counts).sum())
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:  # all observations identical
        return MannWhitneyResult(u_a, u_b, 1.0, "normal")
    z = max(0.0, abs(u_a - mean) - 0.5) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    if not has_ties:
        # fourth-cumulant refinement; the plain continuity-corrected normal
        # misses the exact tail by up to ~0.011 at small samples
        gamma2 = _kappa4(n_a, n_b) / (var * var)
        phi = math.exp(-z * z / 2.0) / math.sqrt(2.0 * math.pi)
        p += 2.0 * gamma2 * (z ** 3 - 3.0 * z) * phi / 24.0
    return MannWhitneyResult(u_a, u_b, min(1.0, max(0.0, p)), "normal")


def _kappa4(m: int, n: int) -> float:
    """Exact fourth cumulant of tie-free U (from the generating-function
    factorization; additive over factors (1-q^(n+i))/(1-q^i))."""
    s1 = m * (m + 1) / 2.0
    s2 = m * (m + 1) * (2 * m + 1) / 6.0
    s3 = m * m * (m + 1) ** 2 / 4.0
    return -(m * n ** 4 + 4 * n ** 3 * s1 + 6 * n ** 2 * s2 + 4 * n * s3) / 120.0
