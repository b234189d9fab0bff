"""Pure numpy implementations of the compiled kernels.

Same contracts and bit-identical outputs as ``_native``; used whenever the
extension is unavailable or PREREQMINE_PURE is set.
"""

import numpy as np

BACKEND = "python"


def average_ranks(values) -> np.ndarray:
    """1-based fractional ranks; tied values share the average of their span."""
    a = np.asarray(values, dtype=np.float64)
    s = np.sort(a)
    lo = np.searchsorted(s, a, side="left")
    hi = np.searchsorted(s, a, side="right")
    return (lo + hi + 1) / 2.0


def ranksum_count_distribution(doubled_ranks, n1: int) -> np.ndarray:
    """Distribution of the size-n1 subset sums of ``doubled_ranks``.

    Returns an int64 array c with c[s] = number of n1-element subsets whose
    elements sum to s, covering every one of the C(N, n1) group assignments.
    Entries are exact (counts stay far below 2**63 for N <= 22).
    """
    d = np.asarray(doubled_ranks, dtype=np.int64)
    n1 = int(n1)
    if not 0 <= n1 <= d.size:
        raise ValueError("subset size out of range")
    smax = int(d.sum())
    dp = np.zeros((n1 + 1, smax + 1), dtype=np.int64)
    dp[0, 0] = 1
    for i, di in enumerate(d):
        di = int(di)
        for k in range(min(n1, i + 1), 0, -1):
            dp[k, di:] += dp[k - 1, : smax + 1 - di]
    return dp[n1]
