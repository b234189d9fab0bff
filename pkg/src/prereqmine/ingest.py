"""Score-file parsing, validation, and per-(skill, topic) aggregation.

Input schema: UTF-8 CSV with header
``student_id,exam_id,topic,skill,question_id,score`` and one row per
(student, question). Scores must already be normalized to [0, 1];
converting platform exports into this shape is the caller's job.
"""

from __future__ import annotations

import csv
import enum
import math
from collections import defaultdict
from typing import Collection, Iterable, TextIO

from prereqmine.errors import (
    DuplicateQuestionScore,
    IngestError,
    MalformedRow,
    ScoreOutOfRange,
    UnknownSkill,
)
from prereqmine.model import ScoreRecord, Skill, SkillTopicMatrix, TopicKey

CSV_HEADER = ("student_id", "exam_id", "topic", "skill", "question_id", "score")


class AggregationPolicy(str, enum.Enum):
    """How multiple question scores in one (student, skill, topic) cell combine."""

    MEAN_OF_QUESTIONS = "mean"
    FIRST_QUESTION = "first"
    MIN_OF_QUESTIONS = "min"


def scan_scores(
    stream: Iterable[str] | TextIO, skills: Collection[Skill] | None = None
) -> tuple[list[ScoreRecord], list[IngestError]]:
    """Parse everything parseable and collect one error per bad row.

    Unlike parse_scores this never raises on data problems, so `validate`
    can report all of them at once. Rows with errors contribute no record.
    """
    records: list[ScoreRecord] = []
    problems: list[IngestError] = []
    seen: set[tuple[str, str]] = set()
    reader = csv.reader(stream)
    header_ok = False
    for lineno, row in enumerate(reader, start=1):
        if lineno == 1:
            if tuple(row) != CSV_HEADER:
                problems.append(
                    MalformedRow(f"expected header {','.join(CSV_HEADER)}", lineno)
                )
            else:
                header_ok = True
            continue
        if len(row) != len(CSV_HEADER):
            problems.append(
                MalformedRow(f"expected {len(CSV_HEADER)} columns, got {len(row)}", lineno)
            )
            continue
        student_id, exam_id, topic, skill, question_id, score_text = row
        if not all((student_id, exam_id, topic, skill, question_id)):
            problems.append(MalformedRow("empty field", lineno))
            continue
        try:
            score = float(score_text)
        except ValueError:
            problems.append(MalformedRow(f"unparseable score {score_text!r}", lineno))
            continue
        if math.isnan(score) or not (0.0 <= score <= 1.0):
            problems.append(ScoreOutOfRange(f"score {score_text} outside [0, 1]", lineno))
            continue
        if skills is not None and skill not in skills:
            problems.append(UnknownSkill(f"skill {skill!r} not in configured set", lineno))
            continue
        key = (student_id, question_id)
        if key in seen:
            problems.append(
                DuplicateQuestionScore(
                    f"repeated (student_id, question_id) = ({student_id}, {question_id})",
                    lineno,
                )
            )
            continue
        seen.add(key)
        records.append(
            ScoreRecord(
                student_id=student_id,
                exam_id=exam_id,
                topic=topic,
                skill=skill,
                question_id=question_id,
                score=score,
            )
        )
    if not header_ok and not problems:
        problems.append(MalformedRow("missing header row", 1))
    return records, problems


def parse_scores(
    stream: Iterable[str] | TextIO, skills: Collection[Skill] | None = None
) -> list[ScoreRecord]:
    """Parse a score CSV strictly, raising on the first bad row.

    skills=None accepts any non-empty skill label; pass the configured set
    to get UnknownSkill diagnostics. Records come back in input order.
    """
    records, problems = scan_scores(stream, skills)
    if problems:
        raise problems[0]
    return records


def _combine(scores_by_qid: list[tuple[str, float]], policy: AggregationPolicy) -> float:
    if policy is AggregationPolicy.MEAN_OF_QUESTIONS:
        return math.fsum(s for _, s in scores_by_qid) / len(scores_by_qid)
    if policy is AggregationPolicy.FIRST_QUESTION:
        # "first" = lexicographically smallest question_id, so the result
        # does not depend on row order
        return min(scores_by_qid)[1]
    return min(s for _, s in scores_by_qid)


def aggregate(
    records: Iterable[ScoreRecord],
    policy: AggregationPolicy = AggregationPolicy.MEAN_OF_QUESTIONS,
) -> list[SkillTopicMatrix]:
    """Fold records into one matrix per distinct (skill, exam, topic) cell.

    Each student's entry is the policy-combined value of their question
    scores in that cell. Output order is fixed by sorting on (skill, exam,
    topic), so the result is independent of input order.
    """
    cells: dict[tuple[Skill, TopicKey], dict[str, list[tuple[str, float]]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for r in records:
        cells[(r.skill, TopicKey(r.exam_id, r.topic))][r.student_id].append(
            (r.question_id, r.score)
        )
    matrices = []
    for (skill, topic), students in sorted(cells.items()):
        scores = {sid: _combine(qs, policy) for sid, qs in students.items()}
        matrices.append(SkillTopicMatrix(skill=skill, topic=topic, scores=scores))
    return matrices


def common_topics(
    a: Skill,
    b: Skill,
    matrices: Iterable[SkillTopicMatrix],
    min_paired: int = 10,
) -> list[TopicKey]:
    """Topics measured for both skills with at least min_paired shared students.

    Symmetric in (a, b); sorted by (exam_id, topic).
    """
    if min_paired < 2:
        raise ValueError("min_paired must be at least 2")
    by_topic: dict[Skill, dict[TopicKey, SkillTopicMatrix]] = defaultdict(dict)
    for m in matrices:
        if m.skill in (a, b):
            by_topic[m.skill][m.topic] = m
    shared_topics = by_topic[a].keys() & by_topic[b].keys()
    usable = [
        t
        for t in shared_topics
        if len(by_topic[a][t].scores.keys() & by_topic[b][t].scores.keys()) >= min_paired
    ]
    return sorted(usable)
