"""Command-line front end: build, analyze, check, subdivide, plan, dual.

Every command emits a run report, either as human-readable text or as JSON
(--json): {command, inputs, result, elapsed_ms}.  Result payloads are
byte-deterministic for identical inputs; elapsed_ms is the one timing field.

Exit codes: 0 ok, 2 usage, 3 graph parse error, 4 cell budget exceeded,
5 self-loop, 6 unreachable goal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .complexes import (
    DEFAULT_CELL_BUDGET,
    LABELED,
    UNLABELED,
    BudgetError,
    SelfLoopError,
    build,
    complex_to_json,
)
from .graphs import (
    Graph,
    GraphParseError,
    builtin,
    check_sufficiency,
    parse_graph,
    serialize_graph,
    subdivide_for,
)
from .planner import UnreachableGoalError, compress, plan, plan_to_json, validate
from .topology import FIELD_F2, FIELD_Q, duality_compare, topology_report

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4
EXIT_SELF_LOOP = 5
EXIT_UNREACHABLE = 6


class UsageError(ValueError):
    """Bad arguments beyond what argparse can catch."""


def _load_graph(source: str) -> Graph:
    """Resolve --graph: an existing file path, else builtin[:param]."""
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return parse_graph(fh.read())
    name, _, param = source.partition(":")
    try:
        return builtin(name, int(param) if param else None)
    except ValueError as exc:
        raise UsageError(f"--graph {source!r}: {exc}") from exc


def _parse_configuration(g: Graph, text: str, what: str) -> tuple[int, ...]:
    ids = []
    for name in text.split(","):
        name = name.strip()
        try:
            ids.append(g.vertex_named(name).id)
        except KeyError as exc:
            raise UsageError(f"{what}: {exc.args[0]}") from exc
    return tuple(ids)


def _mode(args: argparse.Namespace) -> str:
    return UNLABELED if args.unlabeled else LABELED


def _sufficiency_json(g: Graph, report) -> dict:
    witness_path = None
    if report.witness_path is not None:
        w = report.witness_path
        witness_path = {
            "u": g.vertices[w.u].name,
            "v": g.vertices[w.v].name,
            "edges": w.edges,
        }
    witness_cycle = None
    if report.witness_cycle is not None:
        w = report.witness_cycle
        witness_cycle = {
            "edges": [g.edges[e].name for e in w.edge_ids],
            "length": w.edges,
        }
    return {
        "n": report.n,
        "satisfied": report.satisfied,
        "condition1_ok": report.condition1_ok,
        "condition2_ok": report.condition2_ok,
        "vertex_count_ok": report.vertex_count_ok,
        "witness_path": witness_path,
        "witness_cycle": witness_cycle,
    }


def _surface_text(result: dict) -> str:
    surface = result["surface"]
    if surface is None:
        return "surface: not computed"
    if not surface["is_closed_surface"]:
        witness = result["witnesses"]["surface"]
        reason = witness["reason"] if witness else "not a closed surface"
        return f"surface: not a closed surface ({reason})"
    if not surface["connected"]:
        return "surface: closed but disconnected"
    if surface["orientable"]:
        return f"surface: closed orientable surface, genus {surface['genus']}"
    return f"surface: closed non-orientable surface (chi = {surface['chi']})"


def cmd_analyze(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    field = args.field or (FIELD_Q if not args.unlabeled else FIELD_F2)
    if field == FIELD_Q and args.unlabeled:
        raise UsageError("rational Betti numbers require --labeled; use --field f2")
    c = build(g, args.n, _mode(args), args.budget)
    result = topology_report(
        c, field=field, include_surface=args.surface, include_npc=args.npc
    )
    lines = [
        f"analyze {args.graph} n={args.n} {c.mode}",
        f"f-vector: {tuple(result['f_vector'])}",
        f"chi: {result['chi']}",
        f"components: {result['components']}",
        f"betti ({field}): {tuple(result['betti']['values'])}",
    ]
    if args.surface:
        lines.append(_surface_text(result))
    if args.npc:
        if result["npc_flag"]:
            lines.append("npc: all vertex links are flag (non-positive curvature certified)")
        else:
            lines.append(f"npc: link condition fails ({result['witnesses']['npc']['reason']})")
    return result, lines


def cmd_build(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    c = build(g, args.n, _mode(args), args.budget)
    result = complex_to_json(c)
    lines = [
        f"build {args.graph} n={args.n} {c.mode}",
        f"f-vector: {tuple(result['f_vector'])}",
        f"cells: {sum(result['f_vector'])}",
    ]
    return result, lines


def cmd_check(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    report = check_sufficiency(g, args.n)
    result = _sufficiency_json(g, report)
    lines = [f"check {args.graph} n={args.n}"]
    lines.append("satisfied" if report.satisfied else "NOT satisfied")
    lines.append(f"condition 1 (essential separation >= n-1): {'ok' if report.condition1_ok else 'FAIL'}")
    if result["witness_path"]:
        w = result["witness_path"]
        lines.append(f"  witness: {w['u']} -- {w['v']} at distance {w['edges']}")
    lines.append(f"condition 2 (girth >= n+1): {'ok' if report.condition2_ok else 'FAIL'}")
    if result["witness_cycle"]:
        w = result["witness_cycle"]
        lines.append(f"  witness cycle of length {w['length']}: {', '.join(w['edges'])}")
    lines.append(f"vertex count >= n: {'ok' if report.vertex_count_ok else 'FAIL'}")
    return result, lines


def cmd_subdivide(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    refined = subdivide_for(g, args.n)
    multiplier = len(refined.edges) // len(g.edges)
    text = serialize_graph(refined)
    result = {
        "multiplier": multiplier,
        "vertices": len(refined.vertices),
        "edges": len(refined.edges),
        "graph_text": text,
    }
    lines = [
        f"subdivide {args.graph} n={args.n}: every edge into {multiplier} part(s)",
        f"result: {len(refined.vertices)} vertices, {len(refined.edges)} edges",
    ]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        lines.append(f"written to {args.out}")
    else:
        lines.append(text.rstrip("\n"))
    return result, lines


def cmd_plan(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    start = _parse_configuration(g, args.start, "--start")
    goal = _parse_configuration(g, args.goal, "--goal")
    sufficiency_ok = check_sufficiency(g, args.n).satisfied if args.n >= 2 else True
    if not sufficiency_ok:
        print(
            "warning: graph fails the discretization conditions for this robot "
            "count; discrete reachability may differ from the continuous space",
            file=sys.stderr,
        )
    p = plan(g, args.n, start, goal, args.budget)
    if args.compress:
        p = compress(p)
    assert validate(p).ok
    result = plan_to_json(p)
    result["sufficiency_ok"] = sufficiency_ok
    lines = [
        f"plan {args.graph} n={args.n}: {args.start} -> {args.goal}",
        f"moves: {p.total_moves}, steps: {p.makespan}",
    ]
    for i, step in enumerate(result["steps"]):
        moves = "; ".join(f"robot {m['robot']}: {m['from']} -> {m['to']} via {m['via']}" for m in step)
        lines.append(f"step {i + 1}: {moves}")
    return result, lines


def cmd_dual(args: argparse.Namespace) -> tuple[dict, list[str]]:
    g = _load_graph(args.graph)
    report = duality_compare(g, args.n, args.budget)
    result = {
        "n": report.n,
        "dual_n": report.dual_n,
        "chi": report.chi,
        "dual_chi": report.dual_chi,
        "f_vector": list(report.f_vector),
        "dual_f_vector": list(report.dual_f_vector),
        "equal_chi": report.equal_chi,
    }
    lines = [
        f"dual {args.graph}: unlabeled complexes for {report.n} and {report.dual_n} tokens",
        f"chi({report.n} tokens) = {report.chi}, chi({report.dual_n} tokens) = {report.dual_chi}"
        + (" (equal)" if report.equal_chi else " (different)"),
        f"f-vectors: {tuple(report.f_vector)} vs {tuple(report.dual_f_vector)}",
    ]
    return result, lines


COMMANDS = {
    "analyze": cmd_analyze,
    "build": cmd_build,
    "check": cmd_check,
    "subdivide": cmd_subdivide,
    "plan": cmd_plan,
    "dual": cmd_dual,
}


def _add_common(sub: argparse.ArgumentParser, robots: bool = True) -> None:
    sub.add_argument("--graph", required=True, help="graph file path or builtin[:param]")
    if robots:
        sub.add_argument("-n", type=int, required=True, help="robot count")
    sub.add_argument("--budget", type=int, default=DEFAULT_CELL_BUDGET, help="cell budget")
    sub.add_argument("--json", action="store_true", help="emit the run report as JSON")


def _add_mode(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--labeled", action="store_true", default=True)
    group.add_argument("--unlabeled", dest="unlabeled", action="store_true", default=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphconfig",
        description="Discretized configuration spaces of graphs: build, analyze, plan.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("analyze", help="topology report for the configuration complex")
    _add_common(p)
    _add_mode(p)
    p.add_argument("--field", choices=[FIELD_Q, FIELD_F2], default=None, help="Betti coefficient field")
    p.add_argument("--surface", action="store_true", help="run surface classification")
    p.add_argument("--npc", action="store_true", help="run the flag-link curvature check")

    p = subparsers.add_parser("build", help="dump the cube complex as JSON")
    _add_common(p)
    _add_mode(p)

    p = subparsers.add_parser("check", help="check the discretization conditions")
    _add_common(p)

    p = subparsers.add_parser("subdivide", help="uniformly subdivide until the conditions hold")
    _add_common(p)
    p.add_argument("--out", default=None, help="write the subdivided graph file here")

    p = subparsers.add_parser("plan", help="shortest collision-free motion plan")
    _add_common(p)
    p.add_argument("--start", required=True, help="comma-separated vertex names")
    p.add_argument("--goal", required=True, help="comma-separated vertex names")
    p.add_argument("--compress", action="store_true", help="merge commuting moves into parallel steps")

    p = subparsers.add_parser("dual", help="compare unlabeled complexes for n and V-n tokens")
    _add_common(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        result, lines = COMMANDS[args.command](args)
    except GraphParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SelfLoopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SELF_LOOP
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnreachableGoalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    if args.json:
        report = {
            "command": args.command,
            "inputs": {
                k: v for k, v in sorted(vars(args).items()) if k not in ("command", "json")
            },
            "result": result,
            "elapsed_ms": elapsed_ms,
        }
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
