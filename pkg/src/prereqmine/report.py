"""Human- and machine-readable output: result tables, scatter plots of the
directional conviction medians, DOT hierarchy export, score statistics, and
per-skill score histograms.

Every emitter is deterministic: the same inputs produce byte-identical
output. The scatter graphic is a dependency-free standalone SVG (points,
Q1-Q3 error bars, a dashed identity diagonal, axes starting at 1); the
companion CSV carries the exact numbers that were plotted. Quartile-like
numbers render with 2 decimals, p-values at full precision.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from prereqmine.errors import FileWriteError
from prereqmine.hierarchy import PairDistributions
from prereqmine.model import (
    Direction,
    EdgeSupport,
    HierarchyGraph,
    PairTestResult,
    SkillTopicMatrix,
    TopicKey,
)
from prereqmine.stats import quartiles

HISTOGRAM_BIN_WIDTH = 0.05

RESULT_COLUMNS = (
    "skill_a",
    "skill_b",
    "forward_q1",
    "forward_median",
    "forward_q3",
    "backward_q1",
    "backward_median",
    "backward_q3",
    "w_statistic",
    "p_value",
    "decision",
)


def _emit(header: Sequence[str], rows: Iterable[Sequence[str]], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("| " + " | ".join("---" for _ in header) + " |")
        for row in rows:
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'markdown'")


def results_table(results: Iterable[PairTestResult], fmt: str = "csv") -> str:
    """Tabulate pair results, sorted ascending by p-value."""
    ordered = sorted(results, key=lambda r: (r.p_value, r.skill_a, r.skill_b))
    rows = [
        (
            r.skill_a,
            r.skill_b,
            f"{r.forward_stats.q1:.2f}",
            f"{r.forward_stats.median:.2f}",
            f"{r.forward_stats.q3:.2f}",
            f"{r.backward_stats.q1:.2f}",
            f"{r.backward_stats.median:.2f}",
            f"{r.backward_stats.q3:.2f}",
            f"{r.w_statistic:.2f}",
            repr(r.p_value),
            r.decision.value,
        )
        for r in ordered
    ]
    return _emit(RESULT_COLUMNS, rows, fmt)


def score_stats_table(matrices: Iterable[SkillTopicMatrix], fmt: str = "csv") -> str:
    """Per-(exam, topic) rows of Q1/mean/median/Q3 for every skill.

    Combinations a skill was not measured on stay blank.
    """
    by_skill: dict[str, dict[TopicKey, SkillTopicMatrix]] = defaultdict(dict)
    all_topics: set[TopicKey] = set()
    for m in matrices:
        by_skill[m.skill][m.topic] = m
        all_topics.add(m.topic)
    skills = sorted(by_skill)
    header = ["exam_id", "topic"]
    for s in skills:
        header += [f"{s}_q1", f"{s}_mean", f"{s}_median", f"{s}_q3"]
    rows = []
    for topic in sorted(all_topics):
        row = [topic.exam_id, topic.topic]
        for s in skills:
            m = by_skill[s].get(topic)
            if m is None:
                row += ["", "", "", ""]
            else:
                values = list(m.scores.values())
                q = quartiles(values)
                mean = math.fsum(values) / len(values)
                row += [f"{q.q1:.2f}", f"{mean:.2f}", f"{q.median:.2f}", f"{q.q3:.2f}"]
        rows.append(row)
    return _emit(header, rows, fmt)


def dot_export(g: HierarchyGraph) -> str:
    """DOT text for the hierarchy; solid = both thresholds, dashed = one."""
    lines = ["digraph skill_hierarchy {"]
    for node in sorted(g.nodes):
        lines.append(f'    "{node}";')
    for e in sorted(g.edges, key=lambda e: (e.prerequisite, e.dependent)):
        style = "solid" if e.support is EdgeSupport.BOTH_THRESHOLDS else "dashed"
        lines.append(f'    "{e.prerequisite}" -> "{e.dependent}" [style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise FileWriteError(f"cannot write {path}: {exc}") from exc


def scatter_plot(results: Iterable[PairTestResult], out: str | Path) -> None:
    """Write the medians scatter as standalone SVG plus a companion data CSV.

    One point per pair at (forward median, backward median) with Q1-Q3
    error bars on both axes and a dashed y = x diagonal. Points near the
    diagonal are pairs with no directional asymmetry; points far above it
    are pairs where skill_a looks like the dependent skill. The companion
    CSV (same path, .csv suffix) holds the plotted numbers at full
    precision.
    """
    out = Path(out)
    svg_path = out if out.suffix == ".svg" else out.with_suffix(".svg")
    csv_path = svg_path.with_suffix(".csv")
    ordered = sorted(results, key=lambda r: (r.skill_a, r.skill_b))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        (
            "skill_a",
            "skill_b",
            "forward_q1",
            "forward_median",
            "forward_q3",
            "backward_q1",
            "backward_median",
            "backward_q3",
        )
    )
    for r in ordered:
        writer.writerow(
            (
                r.skill_a,
                r.skill_b,
                repr(r.forward_stats.q1),
                repr(r.forward_stats.median),
                repr(r.forward_stats.q3),
                repr(r.backward_stats.q1),
                repr(r.backward_stats.median),
                repr(r.backward_stats.q3),
            )
        )

    width = height = 640.0
    left, right, top, bottom = 80.0, 30.0, 30.0, 80.0
    inner_w = width - left - right
    inner_h = height - top - bottom
    hi = 1.0
    for r in ordered:
        hi = max(hi, r.forward_stats.q3, r.backward_stats.q3)
    axis_max = max(1.5, math.ceil(hi * 1.05 * 10.0) / 10.0)

    def sx(v: float) -> float:
        return left + (v - 1.0) / (axis_max - 1.0) * inner_w

    def sy(v: float) -> float:
        return top + inner_h - (v - 1.0) / (axis_max - 1.0) * inner_h

    svg = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        # axes
        f'<line x1="{left:.2f}" y1="{top + inner_h:.2f}" x2="{left + inner_w:.2f}" '
        f'y2="{top + inner_h:.2f}" stroke="black" stroke-width="1"/>',
        f'<line x1="{left:.2f}" y1="{top:.2f}" x2="{left:.2f}" '
        f'y2="{top + inner_h:.2f}" stroke="black" stroke-width="1"/>',
        # identity diagonal
        f'<line x1="{sx(1.0):.2f}" y1="{sy(1.0):.2f}" x2="{sx(axis_max):.2f}" '
        f'y2="{sy(axis_max):.2f}" stroke="gray" stroke-width="1" stroke-dasharray="6,4"/>',
    ]
    for i in range(6):
        v = 1.0 + i * (axis_max - 1.0) / 5.0
        svg.append(
            f'<line x1="{sx(v):.2f}" y1="{top + inner_h:.2f}" x2="{sx(v):.2f}" '
            f'y2="{top + inner_h + 6:.2f}" stroke="black" stroke-width="1"/>'
        )
        svg.append(
            f'<text x="{sx(v):.2f}" y="{top + inner_h + 22:.2f}" font-size="12" '
            f'text-anchor="middle">{v:.2f}</text>'
        )
        svg.append(
            f'<line x1="{left - 6:.2f}" y1="{sy(v):.2f}" x2="{left:.2f}" '
            f'y2="{sy(v):.2f}" stroke="black" stroke-width="1"/>'
        )
        svg.append(
            f'<text x="{left - 10:.2f}" y="{sy(v) + 4:.2f}" font-size="12" '
            f'text-anchor="end">{v:.2f}</text>'
        )
    svg.append(
        f'<text x="{left + inner_w / 2:.2f}" y="{height - 24:.2f}" font-size="14" '
        f'text-anchor="middle">median conviction A =&gt; B</text>'
    )
    svg.append(
        f'<text x="22.00" y="{top + inner_h / 2:.2f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 22.00 {top + inner_h / 2:.2f})">median conviction B =&gt; A</text>'
    )
    for r in ordered:
        x = sx(r.forward_stats.median)
        y = sy(r.backward_stats.median)
        svg.append(
            f'<line x1="{sx(r.forward_stats.q1):.2f}" y1="{y:.2f}" '
            f'x2="{sx(r.forward_stats.q3):.2f}" y2="{y:.2f}" stroke="steelblue" stroke-width="1"/>'
        )
        svg.append(
            f'<line x1="{x:.2f}" y1="{sy(r.backward_stats.q1):.2f}" '
            f'x2="{x:.2f}" y2="{sy(r.backward_stats.q3):.2f}" stroke="steelblue" stroke-width="1"/>'
        )
        svg.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="steelblue"/>')
        svg.append(
            f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="11">'
            f"{r.skill_a}/{r.skill_b}</text>"
        )
    svg.append("</svg>")

    _write_text(svg_path, "\n".join(svg) + "\n")
    _write_text(csv_path, buf.getvalue())


def distribution_export(matrices: Iterable[SkillTopicMatrix], out: str | Path) -> None:
    """Pooled per-skill score histograms at fixed 0.05-wide bins, as CSV.

    The last bin is closed ([0.95, 1.00]), so perfect scores land in it.
    """
    pooled: dict[str, list[float]] = defaultdict(list)
    for m in matrices:
        pooled[m.skill].extend(m.scores.values())
    edges = np.linspace(0.0, 1.0, 21)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("skill", "bin_start", "bin_end", "count"))
    for skill in sorted(pooled):
        counts, _ = np.histogram(np.asarray(pooled[skill]), bins=edges)
        for i, c in enumerate(counts):
            writer.writerow((skill, f"{edges[i]:.2f}", f"{edges[i + 1]:.2f}", int(c)))
    _write_text(Path(out), buf.getvalue())


def conviction_samples_csv(dists: Iterable[PairDistributions]) -> str:
    """Per-topic conviction samples for both directions of every pair.

    Undefined (dropped) samples appear with the value UNDEFINED so drop
    decisions stay auditable.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("pair", "direction", "exam", "topic", "value"))
    for pd in sorted(dists, key=lambda d: (d.skill_a, d.skill_b)):
        pair = f"{pd.skill_a}/{pd.skill_b}"
        for direction, dist in (
            (Direction.A_TO_B, pd.forward),
            (Direction.B_TO_A, pd.backward),
        ):
            rows = [(t, repr(v)) for t, v in zip(dist.topics, dist.samples)]
            rows += [(t, "UNDEFINED") for t in dist.dropped_topics]
            for topic, value in sorted(rows):
                writer.writerow((pair, direction.value, topic.exam_id, topic.topic, value))
    return buf.getvalue()
