"""Weighted multigraphs with loops, and the structural queries built on them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

VertexId = str
EdgeId = str

_NUMBERED = re.compile(r"^[A-Za-z_]*(\d+)$")


class GraphError(ValueError):
    """Malformed graph data or a reference to a missing vertex or edge."""


class UnknownVertexError(GraphError):
    pass


class UnknownEdgeError(GraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    weight: int
    rational: bool = True


def _next_free(ids: Iterable[str]) -> int:
    best = 0
    for ident in ids:
        m = _NUMBERED.match(ident)
        if m:
            best = max(best, int(m.group(1)) + 1)
    return best


@dataclass(frozen=True, eq=True)
class WeightedGraph:
    """An immutable weighted multigraph.

    ``edges`` maps an edge id to its endpoint pair, stored sorted; equal endpoints
    encode a loop and repeated pairs encode multiple edges.  ``counter`` feeds
    fresh ids and is ignored by equality.
    """

    vertices: Mapping[VertexId, Vertex]
    edges: Mapping[EdgeId, tuple[VertexId, VertexId]]
    counter: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        verts = {str(k): (v if isinstance(v, Vertex) else Vertex(*v)) for k, v in self.vertices.items()}
        if not verts:
            raise GraphError("a weighted graph needs at least one vertex")
        edges: dict[EdgeId, tuple[VertexId, VertexId]] = {}
        for e, ends in self.edges.items():
            a, b = ends
            if a not in verts or b not in verts:
                raise GraphError(f"edge {e} has an endpoint that is not a vertex: {a!r}, {b!r}")
            if e in verts:
                raise GraphError(f"id {e!r} is used by both a vertex and an edge")
            edges[str(e)] = (a, b) if a <= b else (b, a)
        object.__setattr__(self, "vertices", MappingProxyType(verts))
        object.__setattr__(self, "edges", MappingProxyType(edges))
        object.__setattr__(self, "counter", max(self.counter, _next_free([*verts, *edges])))

    __hash__ = None  # type: ignore[assignment]

    # -- construction -------------------------------------------------------

    @classmethod
    def build(
        cls,
        vertices: Mapping[VertexId, int | tuple[int, bool] | Vertex],
        edges: Iterable[tuple[VertexId, VertexId]] = (),
    ) -> "WeightedGraph":
        """Build a graph with edge ids ``e0, e1, ...`` assigned in order."""
        verts = {}
        for v, item in vertices.items():
            if isinstance(item, Vertex):
                verts[v] = item
            elif isinstance(item, tuple):
                verts[v] = Vertex(int(item[0]), bool(item[1]))
            else:
                verts[v] = Vertex(int(item))
        return cls(verts, {f"e{i}": (a, b) for i, (a, b) in enumerate(edges)})

    def replace(
        self,
        vertices: Mapping[VertexId, Vertex] | None = None,
        edges: Mapping[EdgeId, tuple[VertexId, VertexId]] | None = None,
        counter: int | None = None,
    ) -> "WeightedGraph":
        return WeightedGraph(
            self.vertices if vertices is None else vertices,
            self.edges if edges is None else edges,
            self.counter if counter is None else counter,
        )

    def fresh_ids(self, prefixes: Iterable[str]) -> tuple[list[str], int]:
        """One unused id per prefix, drawn from the counter, and the advanced counter."""
        out: list[str] = []
        c = self.counter
        for prefix in prefixes:
            while True:
                ident = f"{prefix}{c}"
                c += 1
                if ident not in self.vertices and ident not in self.edges:
                    out.append(ident)
                    break
        return out, c

    # -- local structure ----------------------------------------------------

    @cached_property
    def incidence(self) -> Mapping[VertexId, tuple[EdgeId, ...]]:
        inc: dict[VertexId, list[EdgeId]] = {v: [] for v in self.vertices}
        for e, (a, b) in self.edges.items():
            inc[a].append(e)
            if b != a:
                inc[b].append(e)
        return {v: tuple(sorted(es)) for v, es in inc.items()}

    def _check(self, v: VertexId) -> None:
        if v not in self.vertices:
            raise UnknownVertexError(f"unknown vertex {v!r}")

    def weight(self, v: VertexId) -> int:
        self._check(v)
        return self.vertices[v].weight

    def is_rational(self, v: VertexId) -> bool:
        self._check(v)
        return self.vertices[v].rational

    def degree(self, v: VertexId) -> int:
        self._check(v)
        return sum(2 if self.edges[e][0] == self.edges[e][1] else 1 for e in self.incidence[v])

    def loops(self, v: VertexId) -> int:
        self._check(v)
        return sum(1 for e in self.incidence[v] if self.edges[e][0] == self.edges[e][1])

    def other_end(self, e: EdgeId, v: VertexId) -> VertexId:
        a, b = self.edges[e]
        return b if a == v else a

    def neighbors(self, v: VertexId) -> dict[VertexId, int]:
        """Distinct neighbors of ``v`` (loops excluded) with edge multiplicities."""
        self._check(v)
        out: dict[VertexId, int] = {}
        for e in self.incidence[v]:
            u = self.other_end(e, v)
            if u != v:
                out[u] = out.get(u, 0) + 1
        return out

    def edges_between(self, u: VertexId, w: VertexId) -> list[EdgeId]:
        self._check(u)
        self._check(w)
        return [e for e in self.incidence[u] if set(self.edges[e]) == {u, w}]

    def multiplicity(self, u: VertexId, w: VertexId) -> int:
        return len(self.edges_between(u, w))

    def total_weight(self) -> int:
        return sum(v.weight for v in self.vertices.values())

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        vs = ", ".join(f"{k}:{v.weight}{'' if v.rational else '*'}" for k, v in sorted(self.vertices.items()))
        es = ", ".join(f"{k}={a}-{b}" for k, (a, b) in sorted(self.edges.items()))
        return f"WeightedGraph({vs} | {es})"

    @cached_property
    def canonical(self):
        from .canon import canonical_labeling

        return canonical_labeling(self)


# -- basic predicates ---------------------------------------------------------


def chain(weights: Iterable[int | tuple[int, bool]]) -> WeightedGraph:
    """Linear graph ``[[w0, w1, ...]]`` on vertices ``v0, v1, ...``."""
    ws = list(weights)
    verts = {f"v{i}": w for i, w in enumerate(ws)}
    return WeightedGraph.build(verts, [(f"v{i}", f"v{i + 1}") for i in range(len(ws) - 1)])


def cycle(weights: Iterable[int | tuple[int, bool]]) -> WeightedGraph:
    """Circular graph ``((w0, w1, ...))``; one vertex gets a loop, two get a double edge."""
    ws = list(weights)
    n = len(ws)
    verts = {f"v{i}": w for i, w in enumerate(ws)}
    if n == 1:
        edges = [("v0", "v0")]
    elif n == 2:
        edges = [("v0", "v1"), ("v0", "v1")]
    else:
        edges = [(f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    return WeightedGraph.build(verts, edges)


def degree(g: WeightedGraph, v: VertexId) -> int:
    return g.degree(v)


def branching_set(g: WeightedGraph) -> frozenset[VertexId]:
    return frozenset(v for v, d in g.vertices.items() if not d.rational or g.degree(v) >= 3)


def end_vertices(g: WeightedGraph) -> frozenset[VertexId]:
    return frozenset(v for v, d in g.vertices.items() if d.rational and g.degree(v) == 1)


def is_at_most_linear(g: WeightedGraph, v: VertexId) -> bool:
    return g.is_rational(v) and g.degree(v) <= 2 and g.loops(v) == 0


def contractible_sites(g: WeightedGraph) -> list[VertexId]:
    """At most linear (-1)-vertices, sorted by id."""
    return sorted(v for v, d in g.vertices.items() if d.weight == -1 and is_at_most_linear(g, v))


def is_minimal(g: WeightedGraph) -> bool:
    return not contractible_sites(g)


def induced_subgraph(g: WeightedGraph, vs: Iterable[VertexId]) -> WeightedGraph:
    keep = set(vs)
    for v in keep:
        g._check(v)
    return WeightedGraph(
        {v: g.vertices[v] for v in keep},
        {e: ab for e, ab in g.edges.items() if ab[0] in keep and ab[1] in keep},
        g.counter,
    )


def components(g: WeightedGraph, removed: Iterable[VertexId] = ()) -> list[list[VertexId]]:
    """Connected components of ``g`` minus ``removed`` (and its incident edges), sorted."""
    gone = set(removed)
    seen: set[VertexId] = set()
    out = []
    for start in sorted(g.vertices):
        if start in gone or start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.neighbors(v):
                if u not in gone and u not in seen:
                    seen.add(u)
                    stack.append(u)
        out.append(sorted(comp))
    return out


def is_connected(g: WeightedGraph) -> bool:
    return len(components(g)) == 1


def is_tree(g: WeightedGraph) -> bool:
    return is_connected(g) and len(g.edges) == len(g.vertices) - 1


# -- segments and branches ---------------------------------------------------


@dataclass(frozen=True)
class SegmentReport:
    vertices: tuple[VertexId, ...]
    shape: str
    position: str
    attachment: int
    admissible: bool
    extremal: bool

    @property
    def is_earring(self) -> bool:
        return self.position == "earring"

    def as_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "shape": self.shape,
            "position": self.position,
            "attachment": self.attachment,
            "admissible": self.admissible,
            "extremal": self.extremal,
        }


def _walk(g: WeightedGraph, comp: set[VertexId], start: VertexId) -> list[VertexId]:
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = sorted(u for u in g.neighbors(cur) if u in comp and u != prev and u not in order)
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def segments(g: WeightedGraph) -> list[SegmentReport]:
    br = branching_set(g)
    out = []
    for comp in components(g, removed=br):
        cs = set(comp)
        inner_edges = [e for e, (a, b) in g.edges.items() if a in cs and b in cs]
        circular = len(inner_edges) == len(cs)
        attach_edges = [
            e for v in comp for e in g.incidence[v] if g.other_end(e, v) in br
        ]
        attachment = len(attach_edges)
        if circular:
            order = _walk(g, cs, min(cs))
            weights = [g.weight(v) for v in order]
            admissible = all(w <= -2 for w in weights) or (len(order) == 1 and weights[0] <= 2)
            extremal = False
            position = "whole-graph"
        else:
            ends = [v for v in comp if sum(1 for u in g.neighbors(v) if u in cs) <= 1]
            order = _walk(g, cs, min(ends))
            weights = [g.weight(v) for v in order]
            admissible = all(w <= -2 for w in weights)
            extremal = any(g.degree(v) <= 1 for v in order)
            anchors = {g.other_end(e, order[0]) for e in attach_edges} if len(order) == 1 else set()
            if (
                len(order) == 1
                and weights[0] == 0
                and attachment == 2
                and len(anchors) == 1
            ):
                position = "earring"
            elif attachment == 0:
                position = "whole-graph"
            elif extremal:
                position = "extremal"
            else:
                position = "inner"
        out.append(
            SegmentReport(tuple(order), "circular" if circular else "linear", position, attachment, admissible, extremal)
        )
    return out


@dataclass(frozen=True)
class Branch:
    vertices: frozenset[VertexId]
    subgraph: WeightedGraph
    simple: bool
    links: int


def branches_at(g: WeightedGraph, v: VertexId) -> list[Branch]:
    g._check(v)
    out = []
    for comp in components(g, removed=[v]):
        links = sum(g.multiplicity(v, u) for u in comp)
        if links:
            out.append(Branch(frozenset(comp), induced_subgraph(g, comp), links == 1, links))
    return out


# -- isomorphism -------------------------------------------------------------


def canonical_key(g: WeightedGraph) -> bytes:
    return g.canonical.key


def are_isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> dict[VertexId, VertexId] | None:
    c1, c2 = g1.canonical, g2.canonical
    if c1.key != c2.key:
        return None
    return dict(zip(c1.order, c2.order))


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    vertices: tuple[VertexId, ...]
    detail: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "detail": self.detail}


def validate(
    g: WeightedGraph, *, require_connected: bool = False, surface_mode: bool = False
) -> list[Violation]:
    """Return the list of violations; an empty list means the graph is acceptable."""
    from .minimality import is_contractible
    from .quadform import is_negative_definite

    out = []
    comps = components(g)
    for comp in comps:
        if is_contractible(induced_subgraph(g, comp)):
            out.append(Violation("contractible-component", tuple(comp), "component contracts to a single (-1)-vertex"))
    if require_connected and len(comps) > 1:
        out.append(Violation("disconnected", (), f"{len(comps)} connected components"))
    if surface_mode and is_negative_definite(g):
        out.append(Violation("negative-definite", (), "intersection form is negative definite"))
    return out
