"""Nonparametric statistics used by the pairwise comparison procedure.

The two-sample comparison is a Wilcoxon rank-sum test reported as a signed
standard-normal statistic with tie correction and no continuity correction:

    z = (R1 - n1(N+1)/2) / sigma,
    sigma^2 = n1*n2/12 * ((N+1) - sum(t^3 - t) / (N(N-1))),
    p = 2 * (1 - Phi(|z|)),

where R1 is group 1's rank sum, N = n1 + n2, and t ranges over tie-group
sizes. ``exact_ranksum_p`` gives the exact permutation p-value for small N
and exists as an independent check on the approximation, not as a pipeline
option.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from prereqmine import _kernels
from prereqmine.errors import DegenerateSamples, TooLargeForExact
from prereqmine.model import Quartiles

EXACT_ENUMERATION_BOUND = 22

_SMALLEST_P = 5e-324  # keep p in (0, 1] even when erfc underflows


@dataclass(frozen=True)
class RankSumResult:
    """Signed-z rank-sum outcome; z < 0 iff group 1 ranks below expectation."""

    z: float
    p_two_sided: float
    n1: int
    n2: int
    tie_groups: int


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def rank_with_ties(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with tied values receiving the average of the ranks they span."""
    if len(values) == 0:
        raise ValueError("cannot rank an empty sequence")
    return _kernels.average_ranks(np.asarray(values, dtype=np.float64)).tolist()


def _tie_group_sizes(pooled: np.ndarray) -> np.ndarray:
    _, counts = np.unique(pooled, return_counts=True)
    return counts


def wilcoxon_ranksum(group1: Sequence[float], group2: Sequence[float]) -> RankSumResult:
    """Two-sided rank-sum test of group1 against group2.

    Raises DegenerateSamples when every pooled value is identical (the rank
    variance collapses to zero and no comparison is possible).
    """
    n1, n2 = len(group1), len(group2)
    if n1 < 2 or n2 < 2:
        raise ValueError("wilcoxon_ranksum needs at least two values per group")
    pooled = np.concatenate(
        [np.asarray(group1, dtype=np.float64), np.asarray(group2, dtype=np.float64)]
    )
    n = n1 + n2
    ranks = _kernels.average_ranks(pooled)
    r1 = float(ranks[:n1].sum())
    mu = n1 * (n + 1) / 2.0
    sizes = _tie_group_sizes(pooled)
    tie_term = float(sum(int(t) ** 3 - int(t) for t in sizes))
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0.0:
        raise DegenerateSamples("all pooled values identical; rank-sum undefined")
    z = (r1 - mu) / math.sqrt(sigma_sq)
    p = min(1.0, max(2.0 * (1.0 - normal_cdf(abs(z))), _SMALLEST_P))
    return RankSumResult(
        z=z,
        p_two_sided=p,
        n1=n1,
        n2=n2,
        tie_groups=int((sizes > 1).sum()),
    )


def exact_ranksum_p(group1: Sequence[float], group2: Sequence[float]) -> float:
    """Exact two-sided permutation p-value of the rank sum.

    Pools and tie-ranks both groups, then counts, over all C(N, n1)
    assignments of the pooled ranks to group 1, the assignments whose rank
    sum deviates from its expectation at least as much as the observed one.
    Only valid up to N = 22 (the enumeration bound).
    """
    n1, n2 = len(group1), len(group2)
    if n1 < 1 or n2 < 1:
        raise ValueError("exact_ranksum_p needs non-empty groups")
    n = n1 + n2
    if n > EXACT_ENUMERATION_BOUND:
        raise TooLargeForExact(f"N = {n} exceeds the enumeration bound {EXACT_ENUMERATION_BOUND}")
    pooled = np.concatenate(
        [np.asarray(group1, dtype=np.float64), np.asarray(group2, dtype=np.float64)]
    )
    # average ranks are multiples of 1/2, so doubling makes them exact integers
    doubled = np.rint(2.0 * _kernels.average_ranks(pooled)).astype(np.int64)
    s_obs = int(doubled[:n1].sum())
    mu2 = n1 * (n + 1)
    counts = _kernels.ranksum_count_distribution(doubled, n1)
    sums = np.arange(counts.size)
    dev = abs(s_obs - mu2)
    extreme = int(counts[np.abs(sums - mu2) >= dev].sum())
    return extreme / math.comb(n, n1)


def quartiles(values: Iterable[float]) -> Quartiles:
    """Linear-interpolation quartiles (position p(n-1)+1 on the sorted sample)."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("quartiles of an empty sequence")
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75])
    return Quartiles(float(q1), float(med), float(q3))


def bonferroni(alpha: float, m: int) -> float:
    """Family-wise corrected significance level alpha / m."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if m < 1:
        raise ValueError("m must be at least 1")
    return alpha / m
