"""Text formats: graph JSON, the bracket shorthand, DOT, sequence JSON and diagram JSON."""

from __future__ import annotations

import json
import re
from typing import Any

from .graph import GraphError, Vertex, WeightedGraph, chain, cycle, is_at_most_linear, is_connected
from .minimality import Diagram
from .moves import (
    BirationalSequence,
    Blowdown,
    InnerBlowup,
    Move,
    OuterBlowup,
    Relabel,
    build_sequence,
    contraction_from_set,
)


class FormatError(GraphError):
    """Unparseable input; ``position`` is a character offset when known."""

    def __init__(self, message: str, position: int | None = None) -> None:
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position


# -- graph JSON --------------------------------------------------------------


def _edge_sort_key(e: str) -> tuple[int, str]:
    digits = re.sub(r"\D", "", e)
    return (int(digits) if digits else -1, e)


def graph_to_dict(g: WeightedGraph) -> dict[str, Any]:
    # edge ids are positional in this format; ordering by id keeps e0, e1, ... stable
    return {
        "vertices": [
            {"id": v, "w": d.weight, "rational": d.rational} for v, d in sorted(g.vertices.items())
        ],
        "edges": [list(g.edges[e]) for e in sorted(g.edges, key=_edge_sort_key)],
    }


def graph_from_dict(data: Any) -> WeightedGraph:
    if not isinstance(data, dict) or "vertices" not in data:
        raise FormatError("graph JSON needs a 'vertices' list")
    verts: dict[str, Vertex] = {}
    for item in data["vertices"]:
        try:
            vid, w = str(item["id"]), item["w"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"vertex entry {item!r} needs 'id' and 'w'") from exc
        if not isinstance(w, int) or isinstance(w, bool):
            raise FormatError(f"weight of {vid!r} must be an integer")
        rational = item.get("rational", True)
        if not isinstance(rational, bool):
            raise FormatError(f"'rational' of {vid!r} must be a boolean")
        if vid in verts:
            raise FormatError(f"duplicate vertex id {vid!r}")
        verts[vid] = Vertex(w, rational)
    edges = []
    for pair in data.get("edges", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"edge {pair!r} must be a two-element list")
        edges.append((str(pair[0]), str(pair[1])))
    return WeightedGraph.build(verts, edges)


def parse_json(text: str) -> WeightedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    return graph_from_dict(data)


# -- shorthand ---------------------------------------------------------------

_ITEM = re.compile(r"\s*([+-]?\d+)(\*?)\s*")


def parse_shorthand(text: str) -> WeightedGraph:
    """``[[1,-2]]`` is a chain, ``((9))`` a loop vertex; a trailing ``*`` marks a non-rational vertex."""
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    if s.startswith("[[") and s.endswith("]]"):
        build = chain
    elif s.startswith("((") and s.endswith("))"):
        build = cycle
    else:
        raise FormatError("expected [[...]] or ((...))", offset)
    body = s[2:-2]
    weights: list[tuple[int, bool]] = []
    pos = 0
    for part in body.split(","):
        m = _ITEM.fullmatch(part)
        if m is None:
            raise FormatError(f"bad weight {part.strip()!r}", offset + 2 + pos)
        weights.append((int(m.group(1)), not m.group(2)))
        pos += len(part) + 1
    return build(weights)


def parse(text: str) -> WeightedGraph:
    """Read either the JSON or the shorthand graph format."""
    return parse_json(text) if text.lstrip().startswith("{") else parse_shorthand(text)


def _walk(g: WeightedGraph, start: str) -> list[str]:
    order, prev, cur = [start], None, start
    while len(order) < len(g):
        nxt = sorted(u for u in g.neighbors(cur) if u != prev and u not in order)
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def _label(g: WeightedGraph, v: str) -> str:
    return f"{g.weight(v)}" + ("" if g.is_rational(v) else "*")


def to_shorthand(g: WeightedGraph) -> str:
    if not is_connected(g):
        raise FormatError("only connected chains and cycles have a shorthand form")
    degrees = [g.degree(v) for v in g.vertices]
    n = len(g)
    if len(g.edges) == n - 1 and max(degrees) <= 2:
        start = min(v for v in g.vertices if g.degree(v) <= 1)
        return "[[" + ",".join(_label(g, v) for v in _walk(g, start)) + "]]"
    if len(g.edges) == n and all(d == 2 for d in degrees):
        return "((" + ",".join(_label(g, v) for v in _walk(g, min(g.vertices))) + "))"
    raise FormatError("only chains and cycles have a shorthand form")


def format_graph(g: WeightedGraph, fmt: str = "json") -> str:
    if fmt == "short":
        return to_shorthand(g)
    if fmt == "json":
        return json.dumps(graph_to_dict(g), separators=(",", ":"))
    raise FormatError(f"unknown graph format {fmt!r}")


# -- DOT ---------------------------------------------------------------------


def to_dot(g: WeightedGraph, name: str = "G") -> str:
    """Weights become labels; non-rational vertices are boxes; blowdown sites are filled."""
    lines = [f"graph {name} {{"]
    for v in sorted(g.vertices):
        attrs = [f'label="{_label(g, v)}"', f'xlabel="{v}"']
        attrs.append("shape=box" if not g.is_rational(v) else "shape=circle")
        if g.weight(v) == -1 and is_at_most_linear(g, v):
            attrs.append('style=filled fillcolor="lightgray"')
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for e in sorted(g.edges, key=_edge_sort_key):
        a, b = g.edges[e]
        lines.append(f'  "{a}" -- "{b}" [id="{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- moves and sequences -----------------------------------------------------


def move_to_dict(m: Move) -> dict[str, Any]:
    if isinstance(m, InnerBlowup):
        out: dict[str, Any] = {"op": "inner_blowup", "edge": m.edge}
        if m.new_vertex is not None:
            out["new"] = m.new_vertex
        if m.new_edges is not None:
            out["new_edges"] = list(m.new_edges)
        return out
    if isinstance(m, OuterBlowup):
        out = {"op": "outer_blowup", "at": m.at}
        if m.new_vertex is not None:
            out["new"] = m.new_vertex
        if m.new_edge is not None:
            out["new_edge"] = m.new_edge
        return out
    if isinstance(m, Blowdown):
        out = {"op": "blowdown", "vertex": m.vertex}
        if m.new_edge is not None:
            out["new_edge"] = m.new_edge
        if m.removed_edges is not None:
            out["removed_edges"] = list(m.removed_edges)
        if m.neighbor is not None:
            out["neighbor"] = m.neighbor
        return out
    return {"op": "relabel", "vertices": dict(m.vertex_map), "edges": dict(m.edge_map)}


def move_from_dict(d: Any) -> Move:
    if not isinstance(d, dict) or "op" not in d:
        raise FormatError(f"step {d!r} needs an 'op'")
    op = d["op"]
    try:
        if op == "inner_blowup":
            ne = d.get("new_edges")
            return InnerBlowup(d["edge"], d.get("new"), tuple(ne) if ne is not None else None)
        if op == "outer_blowup":
            return OuterBlowup(d["at"], d.get("new"), d.get("new_edge"))
        if op == "blowdown":
            re_ = d.get("removed_edges")
            return Blowdown(d["vertex"], d.get("new_edge"), tuple(re_) if re_ is not None else None, d.get("neighbor"))
        if op == "relabel":
            return Relabel.of(d.get("vertices", {}), d.get("edges", {}))
    except KeyError as exc:
        raise FormatError(f"step {d!r} is missing {exc.args[0]!r}") from exc
    raise FormatError(f"unknown op {op!r}")


def sequence_to_dict(seq: BirationalSequence) -> dict[str, Any]:
    return {
        "start": seq.start_key.hex(),
        "steps": [move_to_dict(m) for m in seq.steps],
        "fingerprints": [k.hex() for k in seq.fingerprints],
    }


def sequence_from_dict(data: Any, start: WeightedGraph | None = None) -> BirationalSequence:
    """Read a sequence; without fingerprints it is rebuilt by replaying from ``start``."""
    if not isinstance(data, dict) or "steps" not in data:
        raise FormatError("sequence JSON needs a 'steps' list")
    steps = [move_from_dict(d) for d in data["steps"]]
    if "fingerprints" in data and "start" in data:
        try:
            return BirationalSequence(
                bytes.fromhex(data["start"]), tuple(steps), tuple(bytes.fromhex(k) for k in data["fingerprints"])
            )
        except ValueError as exc:
            raise FormatError("keys must be hex strings") from exc
    if start is None:
        raise FormatError("a sequence without fingerprints needs its start graph")
    seq, _ = build_sequence(start, steps)
    if "start" in data and data["start"] != seq.start_key.hex():
        raise FormatError("start key does not match the given graph")
    return seq


def dump_sequence(seq: BirationalSequence) -> str:
    return json.dumps(sequence_to_dict(seq), indent=1)


def load_sequence(text: str, start: WeightedGraph | None = None) -> BirationalSequence:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    return sequence_from_dict(data, start)


# -- diagrams ----------------------------------------------------------------


def diagram_to_dict(d: Diagram) -> dict[str, Any]:
    return {
        "top": graph_to_dict(d.top),
        "p1": {"contracted": sorted(d.p1.contracted), "target": graph_to_dict(d.p1.target)},
        "p2": {"contracted": sorted(d.p2.contracted), "target": graph_to_dict(d.p2.target)},
        "relatively_minimal": d.relatively_minimal,
    }


def diagram_from_dict(data: Any) -> Diagram:
    """``{"top": graph, "p1": {"contracted": [...]}, "p2": {...}}``; a bare id list also works for each side."""
    if not isinstance(data, dict) or not {"top", "p1", "p2"} <= data.keys():
        raise FormatError("diagram JSON needs 'top', 'p1' and 'p2'")
    top = graph_from_dict(data["top"])

    def side(x: Any):
        ids = x.get("contracted") if isinstance(x, dict) else x
        if not isinstance(ids, list):
            raise FormatError("each side lists its contracted vertex ids")
        return contraction_from_set(top, [str(v) for v in ids])

    return Diagram(top, side(data["p1"]), side(data["p2"]))
