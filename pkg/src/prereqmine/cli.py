"""Command-line entry point.

Subcommands: validate, analyze, synth, report, stats. A JSON config file
(--config) supplies defaults for skills, thresholds, alpha, measure,
aggregation, and min_paired; command-line flags override config values.
Exit codes: 0 success, 1 data or validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import warnings
from pathlib import Path

from prereqmine import __version__, _kernels
from prereqmine.errors import FileWriteError, PrereqMineError, SchemaMismatch
from prereqmine.hierarchy import (
    PairScan,
    build_hierarchy,
    corequisite_candidates,
    detect_cycles,
    run_all_pairs,
    transitive_reduce,
)
from prereqmine.ingest import CSV_HEADER, AggregationPolicy, aggregate, parse_scores, scan_scores
from prereqmine.model import (
    DEFAULT_SKILLS,
    Decision,
    Direction,
    HierarchyGraph,
    PairTestResult,
    ThresholdKind,
)
from prereqmine.report import (
    conviction_samples_csv,
    distribution_export,
    dot_export,
    results_table,
    scatter_plot,
    score_stats_table,
)
from prereqmine.synth import SynthSpec, generate_cohort

RESULTS_SCHEMA = "prereqmine.results/1"

DEFAULT_SETTINGS = {
    "skills": list(DEFAULT_SKILLS),
    "thresholds": ["mean", "median"],
    "alpha": 0.05,
    "measure": "conviction",
    "aggregation": "mean",
    "min_paired": 10,
}

SYNTH_KEYS = (
    "skills",
    "planted_edges",
    "n_students",
    "topics_per_skill",
    "skill_difficulty",
    "noise_sd",
    "mastered_score_shape",
    "unmastered_score_shape",
    "binary_skills",
    "seed",
)


def _load_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except ValueError as exc:
            raise SchemaMismatch(f"{path}: not valid JSON ({exc})") from exc


def _resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULT_SETTINGS)
    config_path = getattr(args, "config", None)
    if config_path:
        cfg = _load_json(config_path)
        if not isinstance(cfg, dict):
            raise SchemaMismatch(f"{config_path}: config must be a JSON object")
        for key in DEFAULT_SETTINGS:
            if key in cfg:
                settings[key] = cfg[key]
    threshold = getattr(args, "threshold", None)
    if threshold:
        settings["thresholds"] = (
            ["mean", "median", "q3"] if threshold == "all" else [threshold]
        )
    for flag, key in (
        ("alpha", "alpha"),
        ("measure", "measure"),
        ("aggregation", "aggregation"),
        ("min_students", "min_paired"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    skills = settings["skills"]
    if not skills or len(set(skills)) != len(skills) or any(not s for s in skills):
        raise PrereqMineError("configured skills must be non-empty and unique")
    settings["thresholds"] = [ThresholdKind(t) for t in settings["thresholds"]]
    settings["aggregation"] = AggregationPolicy(settings["aggregation"])
    return settings


def _json_dump(path: Path, payload) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise FileWriteError(f"cannot write {path}: {exc}") from exc


def cmd_validate(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    with open(args.input, encoding="utf-8", newline="") as fh:
        records, problems = scan_scores(fh, skills=set(settings["skills"]))
    for problem in problems:
        print(f"{args.input}: {problem}", file=sys.stderr)
    if problems:
        print(f"{len(records)} records parsed, {len(problems)} errors")
        return 1
    print(f"{len(records)} records OK")
    return 0


def _render_threshold_outputs(
    out_dir: Path, kind: ThresholdKind, scan: PairScan, fmt: str
) -> None:
    ext = "md" if fmt == "markdown" else "csv"
    table = results_table(scan.results, fmt)
    try:
        (out_dir / f"results_{kind.value}.{ext}").write_text(table, encoding="utf-8")
        (out_dir / f"conviction_samples_{kind.value}.csv").write_text(
            conviction_samples_csv(scan.distributions), encoding="utf-8"
        )
    except OSError as exc:
        raise FileWriteError(str(exc)) from exc
    scatter_plot(scan.results, out_dir / f"scatter_{kind.value}.svg")


def _dropped_entries(scan: PairScan) -> list[dict]:
    entries = []
    for pd in scan.distributions:
        for direction, dist in (
            (Direction.A_TO_B, pd.forward),
            (Direction.B_TO_A, pd.backward),
        ):
            for topic in dist.dropped_topics:
                entries.append(
                    {
                        "pair": [pd.skill_a, pd.skill_b],
                        "direction": direction.value,
                        "exam_id": topic.exam_id,
                        "topic": topic.topic,
                    }
                )
    return entries


def cmd_analyze(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    with open(args.input, encoding="utf-8", newline="") as fh:
        records = parse_scores(fh, skills=set(settings["skills"]))
    matrices = aggregate(records, settings["aggregation"])
    skills_present = sorted({m.skill for m in matrices})
    if len(skills_present) < 2:
        raise PrereqMineError(
            f"need at least two skills in the data, found {skills_present}"
        )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    scans: dict[ThresholdKind, PairScan] = {}
    for kind in settings["thresholds"]:
        scans[kind] = run_all_pairs(
            skills_present,
            kind,
            matrices,
            alpha=settings["alpha"],
            min_paired=settings["min_paired"],
            measure=settings["measure"],
            jobs=args.jobs,
        )
        _render_threshold_outputs(out_dir, kind, scans[kind], args.format)

    graph = build_hierarchy({kind: scan.results for kind, scan in scans.items()})
    cycles = detect_cycles(graph)
    exported = graph
    if args.transitive_reduction:
        if cycles:
            warnings.warn("hierarchy has cycles; skipping transitive reduction")
        else:
            exported = transitive_reduce(graph)
    try:
        (out_dir / "hierarchy.dot").write_text(dot_export(exported), encoding="utf-8")
    except OSError as exc:
        raise FileWriteError(str(exc)) from exc
    hierarchy_payload = {
        "graph": exported.to_dict(),
        "cycles": cycles,
        "transitive_reduction": bool(args.transitive_reduction and not cycles),
    }
    _json_dump(out_dir / "hierarchy.json", hierarchy_payload)

    results_payload = {
        "schema": RESULTS_SCHEMA,
        "alpha": settings["alpha"],
        "measure": settings["measure"],
        "format": args.format,
        "thresholds": {
            kind.value: {
                "alpha_adjusted": scan.alpha_adjusted,
                "m": len(scan.results),
                "results": [r.to_dict() for r in scan.results],
                "skipped": [
                    {"skill_a": s.skill_a, "skill_b": s.skill_b, "reason": s.reason}
                    for s in scan.skipped
                ],
            }
            for kind, scan in scans.items()
        },
        "hierarchy": hierarchy_payload,
    }
    _json_dump(out_dir / "results.json", results_payload)

    coreq = {
        kind.value: [
            {
                "skill_a": r.skill_a,
                "skill_b": r.skill_b,
                "forward_median": r.forward_stats.median,
                "backward_median": r.backward_stats.median,
            }
            for r in corequisite_candidates(scan.results)
        ]
        for kind, scan in scans.items()
    }
    manifest = {
        "tool": {"name": "prereqmine", "version": __version__},
        "kernel_backend": _kernels.BACKEND,
        "config": {
            "input": str(args.input),
            "skills": list(settings["skills"]),
            "skills_present": skills_present,
            "thresholds": [k.value for k in settings["thresholds"]],
            "alpha": settings["alpha"],
            "measure": settings["measure"],
            "aggregation": settings["aggregation"].value,
            "min_paired": settings["min_paired"],
            "transitive_reduction": bool(args.transitive_reduction),
            "format": args.format,
        },
        "thresholds": {
            kind.value: {
                "pairs_tested": len(scan.results),
                "alpha_adjusted": scan.alpha_adjusted,
                "skipped_pairs": [
                    {"skill_a": s.skill_a, "skill_b": s.skill_b, "reason": s.reason}
                    for s in scan.skipped
                ],
                "dropped_samples": _dropped_entries(scan),
            }
            for kind, scan in scans.items()
        },
        "corequisite_candidates_informational": coreq,
    }
    _json_dump(out_dir / "manifest.json", manifest)

    for kind, scan in scans.items():
        significant = sum(
            1 for r in scan.results if r.decision is not Decision.INDEPENDENT
        )
        print(
            f"{kind.value}: {len(scan.results)} pairs tested "
            f"(alpha_adjusted={scan.alpha_adjusted}), {significant} significant, "
            f"{len(scan.skipped)} skipped"
        )
        for r in corequisite_candidates(scan.results):
            print(
                f"  note ({kind.value}): {r.skill_a}/{r.skill_b} look co-requisite "
                f"(conviction high both ways, medians "
                f"{r.forward_stats.median:.2f}/{r.backward_stats.median:.2f}; "
                "informational only)"
            )
    print(f"hierarchy: {len(exported.edges)} edges; outputs in {out_dir}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    payload = {}
    if args.spec:
        data = _load_json(args.spec)
        if not isinstance(data, dict):
            raise SchemaMismatch(f"{args.spec}: synth spec must be a JSON object")
        payload = data.get("synth", data)
        unknown = set(payload) - set(SYNTH_KEYS)
        if unknown:
            raise PrereqMineError(f"unknown synth spec keys: {sorted(unknown)}")
    if args.seed is not None:
        payload = {**payload, "seed": args.seed}
    kwargs = dict(payload)
    for key in ("skills", "binary_skills"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    if "planted_edges" in kwargs:
        kwargs["planted_edges"] = tuple((p, d) for p, d in kwargs["planted_edges"])
    for key in ("mastered_score_shape", "unmastered_score_shape"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    spec = SynthSpec(**kwargs)
    records = generate_cohort(spec)
    out = Path(args.out)
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in records:
                writer.writerow(
                    (r.student_id, r.exam_id, r.topic, r.skill, r.question_id, repr(r.score))
                )
    except OSError as exc:
        raise FileWriteError(f"cannot write {out}: {exc}") from exc
    print(f"wrote {len(records)} records for {spec.n_students} students to {out}")
    print("planted edges:")
    for p, d in spec.planted_edges:
        print(f"  {p} -> {d}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    data = _load_json(args.results)
    if not isinstance(data, dict) or data.get("schema") != RESULTS_SCHEMA:
        raise SchemaMismatch(
            f"{args.results}: expected a results file with schema {RESULTS_SCHEMA!r}"
        )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fmt = args.format or data.get("format", "csv")
    ext = "md" if fmt == "markdown" else "csv"
    try:
        for kind_value, block in sorted(data["thresholds"].items()):
            results = [PairTestResult.from_dict(d) for d in block["results"]]
            (out_dir / f"results_{kind_value}.{ext}").write_text(
                results_table(results, fmt), encoding="utf-8"
            )
            scatter_plot(results, out_dir / f"scatter_{kind_value}.svg")
        graph = HierarchyGraph.from_dict(data["hierarchy"]["graph"])
        (out_dir / "hierarchy.dot").write_text(dot_export(graph), encoding="utf-8")
    except OSError as exc:
        raise FileWriteError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"{args.results}: malformed results file ({exc})") from exc
    print(f"re-rendered artifacts in {out_dir}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    with open(args.input, encoding="utf-8", newline="") as fh:
        records = parse_scores(fh, skills=set(settings["skills"]))
    matrices = aggregate(records, settings["aggregation"])
    table = score_stats_table(matrices, args.format)
    if args.out:
        try:
            Path(args.out).write_text(table, encoding="utf-8")
        except OSError as exc:
            raise FileWriteError(f"cannot write {args.out}: {exc}") from exc
    else:
        print(table, end="")
    if args.histogram:
        distribution_export(matrices, args.histogram)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prereqmine",
        description="Mine prerequisite relationships between skills from score data",
    )
    parser.add_argument("--version", action="version", version=f"prereqmine {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument(
            "--aggregation",
            choices=[a.value for a in AggregationPolicy],
            help="how multiple questions per (skill, topic) combine",
        )

    p = sub.add_parser("validate", help="check a score CSV and report problems")
    p.add_argument("input")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="run the full prerequisite analysis")
    p.add_argument("input")
    p.add_argument("--out-dir", default="prereqmine-out")
    p.add_argument("--threshold", choices=["mean", "median", "q3", "all"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--measure", choices=["conviction", "ls"])
    p.add_argument("--min-students", type=int, dest="min_students")
    p.add_argument("--transitive-reduction", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for pair scans")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate a synthetic cohort CSV")
    p.add_argument("--spec", help="JSON synth spec (or config with a 'synth' key)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override the spec's seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="re-render tables/plots from a results.json")
    p.add_argument("results")
    p.add_argument("--out-dir", default="prereqmine-out")
    p.add_argument("--format", choices=["csv", "markdown"])
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("stats", help="emit the per-topic score statistics table")
    p.add_argument("input")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--histogram", help="also write per-skill histogram CSV here")
    add_common(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileWriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrereqMineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
