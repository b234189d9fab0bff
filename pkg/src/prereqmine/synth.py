"""Synthetic cohort generation with a planted prerequisite DAG.

Each student draws a latent ability theta ~ N(0, 1). A skill is mastered
iff all of its planted prerequisites are mastered and theta plus a fresh
N(0, noise_sd) draw clears the skill's difficulty. Scores then come from
one of two Beta shapes on [0, 1]: a high concentration near 1 for mastered
skills and a diffuse low shape otherwise, which reproduces the left-skewed
look of real exam score distributions. Skills listed in binary_skills emit
the rounded {0, 1} indicator instead of the raw draw.

Randomness is numpy PCG64, seeded per student via
SeedSequence((seed, student_index)), so cohorts are reproducible
byte-for-byte and students can be generated in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from prereqmine.errors import InvalidSpec
from prereqmine.model import DEFAULT_SKILLS, ScoreRecord, Skill

DEFAULT_PLANTED_EDGES: tuple[tuple[Skill, Skill], ...] = (
    ("trace", "write"),
    ("trace", "seq"),
    ("write", "explain"),
    ("reversetrace", "explain"),
)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic cohort. Defaults give a 600-student,
    five-skill cohort with the planted chain above and left-skewed scores."""

    skills: tuple[Skill, ...] = DEFAULT_SKILLS
    planted_edges: tuple[tuple[Skill, Skill], ...] = DEFAULT_PLANTED_EDGES
    n_students: int = 600
    topics_per_skill: int = 10
    skill_difficulty: Mapping[Skill, float] = field(default_factory=dict)
    noise_sd: float = 0.35
    mastered_score_shape: tuple[float, float] = (8.0, 1.5)
    unmastered_score_shape: tuple[float, float] = (1.6, 2.6)
    binary_skills: tuple[Skill, ...] = ("explain",)
    seed: int = 42

    def __post_init__(self):
        if not self.skills or len(set(self.skills)) != len(self.skills):
            raise InvalidSpec("skills must be non-empty and unique")
        if any(not s for s in self.skills):
            raise InvalidSpec("empty skill label")
        known = set(self.skills)
        for p, d in self.planted_edges:
            if p not in known or d not in known:
                raise InvalidSpec(f"planted edge ({p}, {d}) references unknown skill")
            if p == d:
                raise InvalidSpec(f"self-edge on {p}")
        topological_order(self.skills, self.planted_edges)  # raises on a cycle
        if self.n_students < 1:
            raise InvalidSpec("n_students must be at least 1")
        if self.topics_per_skill < 1:
            raise InvalidSpec("topics_per_skill must be at least 1")
        if self.noise_sd < 0:
            raise InvalidSpec("noise_sd must be non-negative")
        for name, shape in (
            ("mastered_score_shape", self.mastered_score_shape),
            ("unmastered_score_shape", self.unmastered_score_shape),
        ):
            if len(shape) != 2 or shape[0] <= 0 or shape[1] <= 0:
                raise InvalidSpec(f"{name} must be two positive Beta parameters")
        if not set(self.binary_skills) <= known:
            raise InvalidSpec("binary_skills must be a subset of skills")
        if not set(self.skill_difficulty) <= known:
            raise InvalidSpec("skill_difficulty keys must be configured skills")

    def difficulty_of(self, skill: Skill) -> float:
        return float(self.skill_difficulty.get(skill, -0.1))


def topological_order(
    skills: Sequence[Skill], edges: Sequence[tuple[Skill, Skill]]
) -> list[Skill]:
    """Kahn's algorithm, stable with respect to the configured skill order."""
    incoming: dict[Skill, set[Skill]] = {s: set() for s in skills}
    for p, d in edges:
        incoming[d].add(p)
    order: list[Skill] = []
    remaining = list(skills)
    while remaining:
        ready = [s for s in remaining if not (incoming[s] - set(order))]
        if not ready:
            raise InvalidSpec(f"planted_edges contain a cycle among {sorted(remaining)}")
        order.append(ready[0])
        remaining.remove(ready[0])
    return order


def _student_rng(spec: SynthSpec, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((spec.seed, index))))


def _draw_mastery(
    rng: np.random.Generator, spec: SynthSpec, order: Sequence[Skill]
) -> dict[Skill, bool]:
    prereqs: dict[Skill, list[Skill]] = {s: [] for s in spec.skills}
    for p, d in spec.planted_edges:
        prereqs[d].append(p)
    theta = rng.normal()
    mastered: dict[Skill, bool] = {}
    for s in order:
        gate = theta + rng.normal(0.0, spec.noise_sd) > spec.difficulty_of(s)
        mastered[s] = bool(gate) and all(mastered[p] for p in prereqs[s])
    return mastered


def mastery_profile(spec: SynthSpec, student_index: int) -> dict[Skill, bool]:
    """The mastery bits generate_cohort uses for one student (for inspection)."""
    order = topological_order(spec.skills, spec.planted_edges)
    return _draw_mastery(_student_rng(spec, student_index), spec, order)


def generate_cohort(spec: SynthSpec) -> list[ScoreRecord]:
    """Generate the cohort's score records, deterministically for a fixed seed.

    All skills share one synthetic exam and the same topic grid, so every
    pair of skills has every topic in common.
    """
    order = topological_order(spec.skills, spec.planted_edges)
    topics = [f"topic{j:02d}" for j in range(spec.topics_per_skill)]
    binary = set(spec.binary_skills)
    records: list[ScoreRecord] = []
    for i in range(spec.n_students):
        rng = _student_rng(spec, i)
        mastered = _draw_mastery(rng, spec, order)
        student_id = f"s{i:04d}"
        for s in spec.skills:
            a, b = (
                spec.mastered_score_shape if mastered[s] else spec.unmastered_score_shape
            )
            for topic in topics:
                score = float(np.clip(rng.beta(a, b), 0.0, 1.0))
                if s in binary:
                    score = 1.0 if score >= 0.5 else 0.0
                records.append(
                    ScoreRecord(
                        student_id=student_id,
                        exam_id="exam1",
                        topic=topic,
                        skill=s,
                        question_id=f"{s}:{topic}",
                        score=score,
                    )
                )
    return records
