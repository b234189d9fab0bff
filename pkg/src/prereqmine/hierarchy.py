"""Pairwise prerequisite testing and hierarchy-graph assembly.

For each unordered skill pair the forward (A=>B) and backward (B=>A)
conviction distributions are compared with a two-sided rank-sum test. A
significant result points at the direction with the larger median: if the
backward distribution dominates, proficiency in B implies proficiency in A
more strongly than the reverse, so A is the prerequisite of B. The engine
never special-cases any skill label; no skill is assumed terminal.
"""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx

from prereqmine.conviction import distribution_from_tables, pair_tables
from prereqmine.errors import (
    ConflictWarning,
    DegenerateSamples,
    InsufficientSamples,
    NoCommonTopics,
)
from prereqmine.model import (
    ConvictionDistribution,
    Decision,
    Direction,
    EdgeSupport,
    HierarchyEdge,
    HierarchyGraph,
    PairTestResult,
    Skill,
    SkillTopicMatrix,
    ThresholdKind,
)
from prereqmine.stats import bonferroni, quartiles, wilcoxon_ranksum

COREQUISITE_MEDIAN_CUTOFF = 1.15


@dataclass(frozen=True)
class PairDistributions:
    """Both directional conviction distributions for one skill pair."""

    skill_a: Skill
    skill_b: Skill
    forward: ConvictionDistribution
    backward: ConvictionDistribution


@dataclass(frozen=True)
class SkippedPair:
    skill_a: Skill
    skill_b: Skill
    reason: str


@dataclass(frozen=True)
class PairScan:
    """run_all_pairs outcome: per-pair results plus skip/drop bookkeeping."""

    results: tuple[PairTestResult, ...]
    skipped: tuple[SkippedPair, ...]
    alpha: float
    alpha_adjusted: float | None
    distributions: tuple[PairDistributions, ...]


def _pair_distributions(
    a: Skill,
    b: Skill,
    kind: ThresholdKind,
    matrices: Sequence[SkillTopicMatrix],
    min_paired: int,
    measure: str,
) -> PairDistributions:
    tables = pair_tables(a, b, kind, matrices, min_paired)
    return PairDistributions(
        skill_a=a,
        skill_b=b,
        forward=distribution_from_tables(a, b, Direction.A_TO_B, tables, measure),
        backward=distribution_from_tables(a, b, Direction.B_TO_A, tables, measure),
    )


def _decide(
    dists: PairDistributions, kind: ThresholdKind, alpha_adjusted: float
) -> PairTestResult:
    forward, backward = dists.forward.samples, dists.backward.samples
    try:
        rs = wilcoxon_ranksum(forward, backward)
        z, p = rs.z, rs.p_two_sided
    except DegenerateSamples:
        # identical constant distributions carry no direction signal
        z, p = 0.0, 1.0
    fs = quartiles(forward)
    bs = quartiles(backward)
    if p < alpha_adjusted and fs.median > bs.median:
        decision = Decision.B_PREREQ_OF_A
    elif p < alpha_adjusted and bs.median > fs.median:
        decision = Decision.A_PREREQ_OF_B
    else:
        decision = Decision.INDEPENDENT
    return PairTestResult(
        skill_a=dists.skill_a,
        skill_b=dists.skill_b,
        threshold=kind,
        forward_stats=fs,
        backward_stats=bs,
        w_statistic=z,
        p_value=p,
        alpha_adjusted=alpha_adjusted,
        decision=decision,
    )


def test_pair(
    a: Skill,
    b: Skill,
    kind: ThresholdKind,
    matrices: Sequence[SkillTopicMatrix],
    alpha_adjusted: float,
    min_paired: int = 10,
    measure: str = "conviction",
) -> PairTestResult:
    """Run the directional comparison for one pair at a given adjusted alpha."""
    dists = _pair_distributions(a, b, kind, matrices, min_paired, measure)
    if len(dists.forward.samples) < 2 or len(dists.backward.samples) < 2:
        raise InsufficientSamples(
            f"{a}/{b}: {len(dists.forward.samples)} forward / "
            f"{len(dists.backward.samples)} backward defined samples; need 2 each"
        )
    return _decide(dists, kind, alpha_adjusted)


def run_all_pairs(
    skills: Sequence[Skill],
    kind: ThresholdKind,
    matrices: Sequence[SkillTopicMatrix],
    alpha: float = 0.05,
    min_paired: int = 10,
    measure: str = "conviction",
    jobs: int = 1,
) -> PairScan:
    """Test every unordered pair; Bonferroni m counts only pairs actually tested.

    Pairs without enough common topics or defined samples are listed as
    skipped. Results come back sorted by ascending p-value (ties broken by
    skill labels); the output is invariant under permutation of `skills`.
    """
    if len(set(skills)) < 2:
        raise ValueError("need at least two distinct skills")
    pairs = list(itertools.combinations(sorted(set(skills)), 2))
    matrices = list(matrices)

    def scan(pair: tuple[Skill, Skill]):
        a, b = pair
        try:
            return _pair_distributions(a, b, kind, matrices, min_paired, measure)
        except NoCommonTopics as exc:
            return SkippedPair(a, b, str(exc))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scanned = list(pool.map(scan, pairs))
    else:
        scanned = [scan(p) for p in pairs]

    testable: list[PairDistributions] = []
    skipped: list[SkippedPair] = []
    for item in scanned:
        if isinstance(item, SkippedPair):
            skipped.append(item)
        elif len(item.forward.samples) < 2 or len(item.backward.samples) < 2:
            skipped.append(
                SkippedPair(
                    item.skill_a,
                    item.skill_b,
                    f"insufficient defined samples ({len(item.forward.samples)} forward, "
                    f"{len(item.backward.samples)} backward)",
                )
            )
        else:
            testable.append(item)

    alpha_adjusted = bonferroni(alpha, len(testable)) if testable else None
    results = [_decide(d, kind, alpha_adjusted) for d in testable]
    results.sort(key=lambda r: (r.p_value, r.skill_a, r.skill_b))
    return PairScan(
        results=tuple(results),
        skipped=tuple(skipped),
        alpha=alpha,
        alpha_adjusted=alpha_adjusted,
        distributions=tuple(testable),
    )


def _directed_edge(r: PairTestResult) -> tuple[Skill, Skill] | None:
    if r.decision is Decision.A_PREREQ_OF_B:
        return (r.skill_a, r.skill_b)
    if r.decision is Decision.B_PREREQ_OF_A:
        return (r.skill_b, r.skill_a)
    return None


def build_hierarchy(
    results_by_threshold: Mapping[ThresholdKind, Iterable[PairTestResult]]
) -> HierarchyGraph:
    """Merge per-threshold pair decisions into one prerequisite graph.

    A direction backed by two or more thresholds gets a BothThresholds
    (solid) edge; by exactly one, SingleThreshold (dashed). Opposite
    directions from different thresholds cancel: no edge, plus a
    ConflictWarning.
    """
    if not results_by_threshold:
        raise ValueError("need results from at least one threshold")
    nodes: set[Skill] = set()
    votes: dict[tuple[Skill, Skill], list[tuple[Skill, Skill]]] = {}
    for _, results in sorted(results_by_threshold.items(), key=lambda kv: kv[0].value):
        for r in results:
            nodes.update((r.skill_a, r.skill_b))
            key = (min(r.skill_a, r.skill_b), max(r.skill_a, r.skill_b))
            votes.setdefault(key, [])
            edge = _directed_edge(r)
            if edge is not None:
                votes[key].append(edge)
    edges: list[HierarchyEdge] = []
    for key in sorted(votes):
        directions = votes[key]
        if not directions:
            continue
        distinct = set(directions)
        if len(distinct) > 1:
            warnings.warn(
                f"thresholds disagree on the direction of {key[0]}/{key[1]}; "
                "omitting the edge",
                ConflictWarning,
                stacklevel=2,
            )
            continue
        prereq, dependent = directions[0]
        support = (
            EdgeSupport.BOTH_THRESHOLDS
            if len(directions) >= 2
            else EdgeSupport.SINGLE_THRESHOLD
        )
        edges.append(HierarchyEdge(prerequisite=prereq, dependent=dependent, support=support))
    edges.sort(key=lambda e: (e.prerequisite, e.dependent))
    return HierarchyGraph(nodes=frozenset(nodes), edges=tuple(edges))


def _as_digraph(g: HierarchyGraph) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(sorted(g.nodes))
    for e in sorted(g.edges, key=lambda e: (e.prerequisite, e.dependent)):
        dg.add_edge(e.prerequisite, e.dependent, support=e.support)
    return dg


def detect_cycles(g: HierarchyGraph) -> list[list[Skill]]:
    """Every directed simple cycle, canonicalized (smallest node first); [] for a DAG."""
    cycles = []
    for cycle in nx.simple_cycles(_as_digraph(g)):
        pivot = cycle.index(min(cycle))
        cycles.append(cycle[pivot:] + cycle[:pivot])
    return sorted(cycles)


def transitive_reduce(g: HierarchyGraph) -> HierarchyGraph:
    """Drop edges implied by transitivity; requires an acyclic graph."""
    if detect_cycles(g):
        raise ValueError("transitive reduction requires an acyclic hierarchy")
    reduced = nx.transitive_reduction(_as_digraph(g))
    edges = tuple(
        e for e in g.edges if reduced.has_edge(e.prerequisite, e.dependent)
    )
    return HierarchyGraph(nodes=g.nodes, edges=edges)


def corequisite_candidates(
    results: Iterable[PairTestResult], cutoff: float = COREQUISITE_MEDIAN_CUTOFF
) -> list[PairTestResult]:
    """Informational only: independent pairs whose medians are high both ways.

    There is no decision rule behind this; it flags pairs whose skills seem
    to grow in tandem so a human can look at them. Never feeds the graph.
    """
    return [
        r
        for r in results
        if r.decision is Decision.INDEPENDENT
        and r.forward_stats.median > cutoff
        and r.backward_stats.median > cutoff
    ]
