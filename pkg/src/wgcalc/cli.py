"""Command-line front end.  Every subcommand prints JSON except ``render``, which prints DOT."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .examples import EXAMPLES, verify_examples
from .formats import (
    FormatError,
    diagram_from_dict,
    diagram_to_dict,
    graph_to_dict,
    load_sequence,
    parse,
    sequence_to_dict,
    to_dot,
    to_shorthand,
)
from .graph import GraphError, WeightedGraph, branching_set, is_minimal, segments, validate
from .minimality import check_graph_lemma, dominate, is_contractible, minimal_model, relatively_minimize
from .moves import apply
from .quadform import discriminant, inertia, intersection_matrix
from .rigidity import (
    enumerate_minimal_models,
    has_unique_minimal_model,
    is_surface_rigid,
    standard_form,
    triangulate_circular,
)

OK, INPUT_ERROR, OPEN = 0, 1, 2


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    p = Path(arg)
    # exists() rather than is_file() so process substitutions like /dev/fd/63 work
    if not arg.lstrip().startswith(("[", "(", "{")) and p.exists():
        return p.read_text()
    return arg


def _graph(arg: str) -> WeightedGraph:
    return parse(_read(arg))


def _show(g: WeightedGraph, fmt: str) -> Any:
    if fmt == "short":
        try:
            return to_shorthand(g)
        except FormatError:
            pass
    return graph_to_dict(g)


def cmd_validate(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    bad = validate(g, require_connected=a.connected, surface_mode=a.surface)
    return {"valid": not bad, "violations": [v.as_dict() for v in bad]}, OK if not bad else INPUT_ERROR


def cmd_info(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    m = intersection_matrix(g)
    return {
        "vertices": len(g),
        "edges": len(g.edges),
        "order": list(m.order),
        "matrix": [list(r) for r in m.entries],
        "discriminant": discriminant(g),
        "inertia": inertia(g).as_dict(),
        "minimal": is_minimal(g),
        "contractible": is_contractible(g),
        "branching": sorted(branching_set(g)),
        "segments": [s.as_dict() for s in segments(g)],
    }, OK


def cmd_minimal_model(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    policy: Any = a.policy or "min-id"
    m, p = minimal_model(g, policy, a.seed)
    return {
        "graph": _show(m, a.format),
        "contracted": list(p.blowdown_order),
        "sequence": sequence_to_dict(p.sequence),
    }, OK


def cmd_rigid(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    v = is_surface_rigid(g)
    out = v.as_dict()
    if v.a1_sequence is not None:
        out["a1_sequence"] = sequence_to_dict(v.a1_sequence)
        out["a1_end"] = _show(apply(g, v.a1_sequence)[-1], a.format)
    return out, OK


def cmd_unique_minimal(a: argparse.Namespace) -> tuple[Any, int]:
    return {"unique_minimal_model": has_unique_minimal_model(_graph(a.graph))}, OK


def cmd_enumerate(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    e = enumerate_minimal_models(g, max_weight_pump=a.pump, max_graph_size=a.max_size, max_results=a.max_results)
    return {
        "classes": len(e),
        "complete": e.complete,
        "reason": e.reason,
        "states": e.states,
        "bounds": e.bounds,
        "graphs": [_show(h, a.format) for h in e.classes.values()],
    }, OK if e.complete else OPEN


def cmd_standard_form(a: argparse.Namespace) -> tuple[Any, int]:
    sf = standard_form(_graph(a.graph))
    graph = sf.shorthand if a.format == "short" else graph_to_dict(sf.graph)
    return {**sf.as_dict(), "graph": graph, "sequence": sequence_to_dict(sf.reduction)}, OK


def cmd_triangulate(a: argparse.Namespace) -> tuple[Any, int]:
    t = triangulate_circular(_graph(a.graph))
    return {"triangulation": None if t is None else t.as_dict()}, OK


def cmd_apply(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    seq = load_sequence(_read(a.sequence), g)
    trace = apply(g, seq)
    return {"trace": [_show(h, a.format) for h in trace]}, OK


def cmd_dominate(a: argparse.Namespace) -> tuple[Any, int]:
    g = _graph(a.graph)
    seq = load_sequence(_read(a.sequence), g)
    d = dominate(g, seq)
    if a.minimize:
        d = relatively_minimize(d)
    return diagram_to_dict(d), OK


def cmd_check_graph_lemma(a: argparse.Namespace) -> tuple[Any, int]:
    try:
        data = json.loads(_read(a.diagram))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    report = check_graph_lemma(diagram_from_dict(data))
    return report.as_dict(), OK


def cmd_examples(a: argparse.Namespace) -> tuple[Any, int]:
    if not a.verify:
        return [
            {"name": ex.name, "graph": _show(ex.graph, a.format), "expected": ex.expected, "provenance": ex.provenance}
            for ex in EXAMPLES
        ], OK
    results = verify_examples()
    failed = [r for r in results if not r.ok]
    return {"checked": len(results), "failed": [r.as_dict() for r in failed]}, OK if not failed else INPUT_ERROR


COMMANDS: dict[str, Callable[[argparse.Namespace], tuple[Any, int]]] = {
    "validate": cmd_validate,
    "info": cmd_info,
    "minimal-model": cmd_minimal_model,
    "rigid": cmd_rigid,
    "unique-minimal": cmd_unique_minimal,
    "enumerate": cmd_enumerate,
    "standard-form": cmd_standard_form,
    "triangulate": cmd_triangulate,
    "apply": cmd_apply,
    "dominate": cmd_dominate,
    "check-graph-lemma": cmd_check_graph_lemma,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgcalc", description="Birational calculus of weighted graphs.")
    parser.add_argument("--format", choices=["json", "short"], default="json", help="how graphs appear in output")
    # the same flag after the subcommand; SUPPRESS keeps the top-level default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "short"], default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    graph_help = "graph as JSON or shorthand text, a file holding either, or - for stdin"

    def add(name: str, help: str, graph: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        if graph:
            p.add_argument("graph", help=graph_help)
        return p

    p = add("validate", "report structural violations")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--surface", action="store_true", help="also reject negative definite forms")
    add("info", "intersection matrix, discriminant, inertia and segments")
    p = add("minimal-model", "contract to a minimal graph")
    p.add_argument("--policy", help="min-id, max-id, random, or a comma-separated id priority list")
    p.add_argument("--seed", type=int)
    add("rigid", "surface rigidity verdict with an A1-fibration witness")
    add("unique-minimal", "does the class have a single minimal model")
    p = add("enumerate", "minimal models found by pumping and bounded search")
    p.add_argument("--pump", type=int, default=4)
    p.add_argument("--max-size", type=int)
    p.add_argument("--max-results", type=int)
    add("standard-form", "reduce a single chain or cycle to standard form")
    add("triangulate", "triangulation witness for a circular graph")
    p = add("apply", "replay a sequence file and print the trace")
    p.add_argument("sequence")
    p = add("dominate", "a diagram dominating both ends of a sequence")
    p.add_argument("sequence")
    p.add_argument("--minimize", action="store_true", help="peel to a relatively minimal diagram")
    p = add("check-graph-lemma", "check a relatively minimal diagram", graph=False)
    p.add_argument("diagram", help="diagram JSON: top graph and the contracted ids of each side")
    add("render", "DOT export")
    p = add("examples", "list the built-in examples", graph=False)
    p.add_argument("--verify", action="store_true", help="recompute every expected value")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for open verdicts here
        return INPUT_ERROR if exc.code else OK
    try:
        if a.command == "render":
            sys.stdout.write(to_dot(_graph(a.graph)))
            return OK
        out, code = COMMANDS[a.command](a)
    except (GraphError, OSError) as exc:
        json.dump({"error": str(exc), "kind": type(exc).__name__}, sys.stdout)
        sys.stdout.write("\n")
        return INPUT_ERROR
    json.dump(out, sys.stdout)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
