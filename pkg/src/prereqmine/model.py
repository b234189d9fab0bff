"""Domain types shared by the whole pipeline.

All types are immutable values after construction and safe to share across
parallel workers. Each serializes to a documented JSON shape via
``to_dict``/``from_dict``; enum values serialize as the strings listed on
the class.

A skill is a plain string label (``Skill`` alias). The default set mirrors
a five-skill introductory programming assessment, but nothing in the engine
is tied to those five labels or to the count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Mapping, NamedTuple

Skill = str

DEFAULT_SKILLS: tuple[Skill, ...] = ("write", "trace", "reversetrace", "seq", "explain")


class ThresholdKind(str, enum.Enum):
    """Which per-cell statistic converts continuous scores to bits."""

    MEAN = "mean"
    MEDIAN = "median"
    Q3 = "q3"


class Direction(str, enum.Enum):
    """Direction of an implication between the two skills of a pair."""

    A_TO_B = "A=>B"
    B_TO_A = "B=>A"

    def flipped(self) -> "Direction":
        return Direction.B_TO_A if self is Direction.A_TO_B else Direction.A_TO_B


class Decision(str, enum.Enum):
    A_PREREQ_OF_B = "A_prereq_of_B"
    B_PREREQ_OF_A = "B_prereq_of_A"
    INDEPENDENT = "independent"


class EdgeSupport(str, enum.Enum):
    """How many thresholds back a hierarchy edge (solid vs dashed rendering)."""

    BOTH_THRESHOLDS = "both_thresholds"
    SINGLE_THRESHOLD = "single_threshold"


class Quartiles(NamedTuple):
    """(Q1, median, Q3) summary of a sample."""

    q1: float
    median: float
    q3: float

    def to_dict(self) -> dict[str, float]:
        return {"q1": self.q1, "median": self.median, "q3": self.q3}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Quartiles":
        return cls(float(d["q1"]), float(d["median"]), float(d["q3"]))


@dataclass(frozen=True, order=True)
class TopicKey:
    """Identity of one measurement unit: a topic within one exam.

    The same topic name appearing on two exams is two distinct units; score
    distributions measured at different course stages are never pooled.
    """

    exam_id: str
    topic: str

    def __post_init__(self):
        if not self.exam_id or not self.topic:
            raise ValueError("TopicKey components must be non-empty")

    def to_dict(self) -> dict[str, str]:
        return {"exam_id": self.exam_id, "topic": self.topic}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TopicKey":
        return cls(exam_id=d["exam_id"], topic=d["topic"])


@dataclass(frozen=True)
class ScoreRecord:
    """One student's normalized score on one question."""

    student_id: str
    exam_id: str
    topic: str
    skill: Skill
    question_id: str
    score: float

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score} outside [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {
            "student_id": self.student_id,
            "exam_id": self.exam_id,
            "topic": self.topic,
            "skill": self.skill,
            "question_id": self.question_id,
            "score": self.score,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ScoreRecord":
        return cls(
            student_id=d["student_id"],
            exam_id=d["exam_id"],
            topic=d["topic"],
            skill=d["skill"],
            question_id=d["question_id"],
            score=float(d["score"]),
        )


@dataclass(frozen=True)
class SkillTopicMatrix:
    """Aggregated scores of one skill on one topic: student_id -> score in [0, 1].

    The scores mapping is treated as immutable after construction.
    """

    skill: Skill
    topic: TopicKey
    scores: Mapping[str, float]

    def __post_init__(self):
        for student, value in self.scores.items():
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"score {value} for {student!r} outside [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {
            "skill": self.skill,
            "topic": self.topic.to_dict(),
            "scores": dict(self.scores),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SkillTopicMatrix":
        return cls(
            skill=d["skill"],
            topic=TopicKey.from_dict(d["topic"]),
            scores={k: float(v) for k, v in d["scores"].items()},
        )


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 counts of paired above/at-or-below outcomes for two skills.

    Lowercase letter = above threshold, uppercase = at or below:
    n_ab both above, n_aB only A above, n_Ab only B above, n_AB neither.
    """

    n_ab: int
    n_aB: int
    n_Ab: int
    n_AB: int

    def __post_init__(self):
        counts = (self.n_ab, self.n_aB, self.n_Ab, self.n_AB)
        if any(c < 0 for c in counts):
            raise ValueError("negative contingency count")
        if sum(counts) < 1:
            raise ValueError("contingency table must count at least one student")

    @property
    def total(self) -> int:
        return self.n_ab + self.n_aB + self.n_Ab + self.n_AB

    @property
    def p_a(self) -> float:
        """Proportion above threshold on skill A."""
        return (self.n_ab + self.n_aB) / self.total

    @property
    def p_b(self) -> float:
        return (self.n_ab + self.n_Ab) / self.total

    @property
    def p_not_a(self) -> float:
        return (self.n_Ab + self.n_AB) / self.total

    @property
    def p_not_b(self) -> float:
        return (self.n_aB + self.n_AB) / self.total

    def cell_proportions(self) -> tuple[float, float, float, float]:
        t = self.total
        return (self.n_ab / t, self.n_aB / t, self.n_Ab / t, self.n_AB / t)

    def swap_skills(self) -> "ContingencyTable":
        """Relabel A as B and B as A."""
        return ContingencyTable(self.n_ab, self.n_Ab, self.n_aB, self.n_AB)

    def negate_a(self) -> "ContingencyTable":
        """Swap the above/at-or-below rows of skill A."""
        return ContingencyTable(self.n_Ab, self.n_AB, self.n_ab, self.n_aB)

    def negate_b(self) -> "ContingencyTable":
        """Swap the above/at-or-below columns of skill B."""
        return ContingencyTable(self.n_aB, self.n_ab, self.n_AB, self.n_Ab)

    def to_dict(self) -> dict[str, int]:
        return {"n_ab": self.n_ab, "n_aB": self.n_aB, "n_Ab": self.n_Ab, "n_AB": self.n_AB}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ContingencyTable":
        return cls(int(d["n_ab"]), int(d["n_aB"]), int(d["n_Ab"]), int(d["n_AB"]))


@dataclass(frozen=True)
class ConvictionSample:
    """One topic's implication-strength value for one direction of a pair.

    value is None exactly when that direction's denominator count was zero
    (the undefined case); defined values are positive.
    """

    skill_a: Skill
    skill_b: Skill
    direction: Direction
    topic: TopicKey
    value: float | None

    def __post_init__(self):
        if self.value is not None and self.value <= 0:
            raise ValueError("defined conviction value must be positive")

    def to_dict(self) -> dict[str, Any]:
        return {
            "pair": [self.skill_a, self.skill_b],
            "direction": self.direction.value,
            "topic": self.topic.to_dict(),
            "value": self.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ConvictionSample":
        a, b = d["pair"]
        value = d["value"]
        return cls(
            skill_a=a,
            skill_b=b,
            direction=Direction(d["direction"]),
            topic=TopicKey.from_dict(d["topic"]),
            value=None if value is None else float(value),
        )


@dataclass(frozen=True)
class ConvictionDistribution:
    """Per-topic conviction values for one direction, with drop accounting.

    samples[i] came from topics[i]; dropped_topics identifies the topics
    whose value was undefined, so dropped == len(dropped_topics) and
    dropped == attempted topics - defined samples.
    """

    samples: tuple[float, ...]
    dropped: int
    topics: tuple[TopicKey, ...]
    dropped_topics: tuple[TopicKey, ...] = ()

    def __post_init__(self):
        if len(self.samples) != len(self.topics):
            raise ValueError("samples and topics must be parallel")
        if self.dropped != len(self.dropped_topics):
            raise ValueError("dropped count must match dropped_topics")

    def to_dict(self) -> dict[str, Any]:
        return {
            "samples": list(self.samples),
            "dropped": self.dropped,
            "topics": [t.to_dict() for t in self.topics],
            "dropped_topics": [t.to_dict() for t in self.dropped_topics],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ConvictionDistribution":
        return cls(
            samples=tuple(float(v) for v in d["samples"]),
            dropped=int(d["dropped"]),
            topics=tuple(TopicKey.from_dict(t) for t in d["topics"]),
            dropped_topics=tuple(TopicKey.from_dict(t) for t in d["dropped_topics"]),
        )


@dataclass(frozen=True)
class PairTestResult:
    """Outcome of the directional comparison for one skill pair.

    w_statistic is the signed standard-normal rank-sum statistic of the
    forward (A=>B) conviction samples against the backward (B=>A) ones;
    negative values mean the forward distribution sits lower, i.e. evidence
    that A is the prerequisite.
    """

    skill_a: Skill
    skill_b: Skill
    threshold: ThresholdKind
    forward_stats: Quartiles
    backward_stats: Quartiles
    w_statistic: float
    p_value: float
    alpha_adjusted: float
    decision: Decision

    def __post_init__(self):
        if not (0.0 < self.p_value <= 1.0):
            raise ValueError("p_value must lie in (0, 1]")
        if self.decision is not Decision.INDEPENDENT:
            if self.p_value >= self.alpha_adjusted:
                raise ValueError("directional decision requires p < alpha_adjusted")
            if self.forward_stats.median == self.backward_stats.median:
                raise ValueError("directional decision requires unequal medians")

    def to_dict(self) -> dict[str, Any]:
        return {
            "skill_a": self.skill_a,
            "skill_b": self.skill_b,
            "threshold": self.threshold.value,
            "forward_stats": self.forward_stats.to_dict(),
            "backward_stats": self.backward_stats.to_dict(),
            "w_statistic": self.w_statistic,
            "p_value": self.p_value,
            "alpha_adjusted": self.alpha_adjusted,
            "decision": self.decision.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "PairTestResult":
        return cls(
            skill_a=d["skill_a"],
            skill_b=d["skill_b"],
            threshold=ThresholdKind(d["threshold"]),
            forward_stats=Quartiles.from_dict(d["forward_stats"]),
            backward_stats=Quartiles.from_dict(d["backward_stats"]),
            w_statistic=float(d["w_statistic"]),
            p_value=float(d["p_value"]),
            alpha_adjusted=float(d["alpha_adjusted"]),
            decision=Decision(d["decision"]),
        )


@dataclass(frozen=True)
class HierarchyEdge:
    """Directed edge from a prerequisite skill to the skill that depends on it."""

    prerequisite: Skill
    dependent: Skill
    support: EdgeSupport

    def to_dict(self) -> dict[str, str]:
        return {
            "from": self.prerequisite,
            "to": self.dependent,
            "support": self.support.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "HierarchyEdge":
        return cls(
            prerequisite=d["from"],
            dependent=d["to"],
            support=EdgeSupport(d["support"]),
        )


@dataclass(frozen=True)
class HierarchyGraph:
    """Skill prerequisite graph; at most one edge per unordered skill pair."""

    nodes: frozenset[Skill]
    edges: tuple[HierarchyEdge, ...]

    def __post_init__(self):
        seen: set[frozenset[Skill]] = set()
        for e in self.edges:
            if e.prerequisite == e.dependent:
                raise ValueError(f"self-loop on {e.prerequisite!r}")
            if e.prerequisite not in self.nodes or e.dependent not in self.nodes:
                raise ValueError("edge endpoint missing from nodes")
            pair = frozenset((e.prerequisite, e.dependent))
            if pair in seen:
                raise ValueError(f"duplicate edge for pair {sorted(pair)}")
            seen.add(pair)

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": sorted(self.nodes),
            "edges": [
                e.to_dict()
                for e in sorted(self.edges, key=lambda e: (e.prerequisite, e.dependent))
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "HierarchyGraph":
        return cls(
            nodes=frozenset(d["nodes"]),
            edges=tuple(HierarchyEdge.from_dict(e) for e in d["edges"]),
        )
