"""Contingency tables and implication-strength measures.

Conviction of A=>B on a 2x2 table of above/at-or-below counts:

    Conviction(A=>B) = P(A) * P(not B) / P(A and not B)

It equals 1 when the two bits are independent and grows without bound as
A=>B approaches logical implication; it is undefined exactly when the
count behind P(A and not B) is zero. LS (P(A|B)/P(A|not B)) and LN
(P(notA|B)/P(notA|not B)) are provided as alternatives; only conviction
and LS may drive decisions, LN exists for completeness and testing.
"""

from __future__ import annotations

import logging
from typing import Iterable, Mapping

from prereqmine.errors import NoCommonTopics, NoPairedStudents
from prereqmine.ingest import common_topics
from prereqmine.model import (
    ContingencyTable,
    ConvictionDistribution,
    Direction,
    Skill,
    SkillTopicMatrix,
    ThresholdKind,
    TopicKey,
)
from prereqmine.threshold import binarize_matrix

log = logging.getLogger(__name__)

MEASURES = ("conviction", "ls")


def contingency(bits_a: Mapping[str, int], bits_b: Mapping[str, int]) -> ContingencyTable:
    """Count paired outcomes over the students present in both maps.

    Students missing from either map are ignored (pairwise deletion).
    """
    shared = bits_a.keys() & bits_b.keys()
    if not shared:
        raise NoPairedStudents("no student appears in both bit maps")
    n_ab = n_aB = n_Ab = n_AB = 0
    for s in shared:
        if bits_a[s]:
            if bits_b[s]:
                n_ab += 1
            else:
                n_aB += 1
        elif bits_b[s]:
            n_Ab += 1
        else:
            n_AB += 1
    return ContingencyTable(n_ab=n_ab, n_aB=n_aB, n_Ab=n_Ab, n_AB=n_AB)


def conviction_value(t: ContingencyTable, direction: Direction) -> float | None:
    """Conviction for one direction; None when the denominator count is zero."""
    if direction is Direction.B_TO_A:
        t = t.swap_skills()
    if t.n_aB == 0:
        return None
    # P(A) * P(notB) / P(A and notB), with the shared 1/total factors cancelled
    return (t.n_ab + t.n_aB) * (t.n_aB + t.n_AB) / (t.total * t.n_aB)


def likelihood_sufficiency(t: ContingencyTable) -> float | None:
    """LS = P(A|B) / P(A|not B); None when P(A|not B) = 0 or P(B) is 0 or 1."""
    n_b = t.n_ab + t.n_Ab
    n_not_b = t.n_aB + t.n_AB
    if n_b == 0 or n_not_b == 0 or t.n_aB == 0:
        return None
    return (t.n_ab / n_b) / (t.n_aB / n_not_b)


def likelihood_necessity(t: ContingencyTable) -> float | None:
    """LN = P(notA|B) / P(notA|not B); None when P(notA|not B) = 0 or P(B) is 0 or 1."""
    n_b = t.n_ab + t.n_Ab
    n_not_b = t.n_aB + t.n_AB
    if n_b == 0 or n_not_b == 0 or t.n_AB == 0:
        return None
    return (t.n_Ab / n_b) / (t.n_AB / n_not_b)


def measure_value(t: ContingencyTable, direction: Direction, measure: str) -> float | None:
    """Dispatch on the configured measure for one direction of a pair."""
    if measure == "conviction":
        return conviction_value(t, direction)
    if measure == "ls":
        if direction is Direction.B_TO_A:
            t = t.swap_skills()
        return likelihood_sufficiency(t)
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def pair_tables(
    a: Skill,
    b: Skill,
    kind: ThresholdKind,
    matrices: Iterable[SkillTopicMatrix],
    min_paired: int = 10,
) -> list[tuple[TopicKey, ContingencyTable]]:
    """Binarize and pair both skills on every common topic.

    Thresholds are computed per cell over all of that cell's students; the
    contingency counts then run over the students shared by the two cells.
    """
    matrices = list(matrices)
    topics = common_topics(a, b, matrices, min_paired)
    if not topics:
        raise NoCommonTopics(f"{a} and {b} share no topic with enough paired students")
    index = {(m.skill, m.topic): m for m in matrices}
    out = []
    for t in topics:
        bits_a = binarize_matrix(index[(a, t)], kind)
        bits_b = binarize_matrix(index[(b, t)], kind)
        out.append((t, contingency(bits_a, bits_b)))
    return out


def distribution_from_tables(
    a: Skill,
    b: Skill,
    direction: Direction,
    tables: Iterable[tuple[TopicKey, ContingencyTable]],
    measure: str = "conviction",
) -> ConvictionDistribution:
    """One sample per topic; undefined samples are dropped and counted."""
    samples: list[float] = []
    kept: list[TopicKey] = []
    dropped: list[TopicKey] = []
    for topic, table in tables:
        v = measure_value(table, direction, measure)
        if v is None:
            dropped.append(topic)
            log.warning(
                "undefined %s dropped: %s/%s %s on %s/%s",
                measure, a, b, direction.value, topic.exam_id, topic.topic,
            )
        else:
            samples.append(v)
            kept.append(topic)
    return ConvictionDistribution(
        samples=tuple(samples),
        dropped=len(dropped),
        topics=tuple(kept),
        dropped_topics=tuple(dropped),
    )


def conviction_distribution(
    a: Skill,
    b: Skill,
    direction: Direction,
    kind: ThresholdKind,
    matrices: Iterable[SkillTopicMatrix],
    min_paired: int = 10,
    measure: str = "conviction",
) -> ConvictionDistribution:
    """Per-topic conviction distribution for one direction of a skill pair."""
    tables = pair_tables(a, b, kind, matrices, min_paired)
    return distribution_from_tables(a, b, direction, tables, measure)
