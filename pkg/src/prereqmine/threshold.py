"""Binarization of continuous scores against per-cell thresholds.

The threshold is always computed from the score distribution of the cell
(one skill on one topic) the value came from; distributions are never
pooled across topics. Bit semantics: 1 = strictly above the threshold,
0 = at or below, with one exception — under the median and Q3 rules a
perfect score of 1 always maps to 1, even when the threshold itself is 1.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from prereqmine.errors import EmptyDistribution
from prereqmine.model import SkillTopicMatrix, ThresholdKind
from prereqmine.stats import quartiles


def _mean(dist: Sequence[float]) -> float:
    lo, hi = min(dist), max(dist)
    if lo == hi:
        # exact value for constant cells, so x > mean never holds for members
        return lo
    return math.fsum(dist) / len(dist)


def _checked(dist: Sequence[float]) -> Sequence[float]:
    if len(dist) == 0:
        raise EmptyDistribution("threshold asked for on an empty distribution")
    return dist


def mean_binarize(x: float, dist: Sequence[float]) -> int:
    """1 iff x > mean(dist), else 0."""
    return 1 if x > _mean(_checked(dist)) else 0


def median_binarize(x: float, dist: Sequence[float]) -> int:
    """1 if x = 1; otherwise 1 iff x > median(dist)."""
    _checked(dist)
    if x == 1.0:
        return 1
    return 1 if x > quartiles(dist).median else 0


def q3_binarize(x: float, dist: Sequence[float]) -> int:
    """1 if x = 1; otherwise 1 iff x > Q3(dist)."""
    _checked(dist)
    if x == 1.0:
        return 1
    return 1 if x > quartiles(dist).q3 else 0


def binarize_matrix(m: SkillTopicMatrix, kind: ThresholdKind) -> dict[str, int]:
    """Apply one threshold rule to every student in a cell.

    The threshold comes from the cell's own score distribution; the result
    keeps exactly the cell's student keys.
    """
    dist = list(m.scores.values())
    if not dist:
        raise EmptyDistribution(f"empty cell {m.skill}/{m.topic.exam_id}/{m.topic.topic}")
    if kind is ThresholdKind.MEAN:
        thr = _mean(dist)
        return {s: 1 if v > thr else 0 for s, v in m.scores.items()}
    q = quartiles(dist)
    thr = q.median if kind is ThresholdKind.MEDIAN else q.q3
    return {s: 1 if (v == 1.0 or v > thr) else 0 for s, v in m.scores.items()}


def binarize_value(x: float, dist: Sequence[float], kind: ThresholdKind) -> int:
    """Single-value counterpart of binarize_matrix."""
    if kind is ThresholdKind.MEAN:
        return mean_binarize(x, dist)
    if kind is ThresholdKind.MEDIAN:
        return median_binarize(x, dist)
    return q3_binarize(x, dist)
