"""Blowups, blowdowns and relabelings, replayable sequences, and contractions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .graph import (
    EdgeId,
    GraphError,
    UnknownEdgeError,
    UnknownVertexError,
    Vertex,
    VertexId,
    WeightedGraph,
    canonical_key,
)


class MoveError(GraphError):
    """A move whose precondition does not hold."""


class SequenceError(GraphError):
    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class InnerBlowup:
    edge: EdgeId
    new_vertex: VertexId | None = None
    # the first new edge meets the smaller endpoint of ``edge``
    new_edges: tuple[EdgeId, EdgeId] | None = None


@dataclass(frozen=True)
class OuterBlowup:
    at: VertexId
    new_vertex: VertexId | None = None
    new_edge: EdgeId | None = None


@dataclass(frozen=True)
class Blowdown:
    vertex: VertexId
    new_edge: EdgeId | None = None
    removed_edges: tuple[EdgeId, ...] | None = None
    neighbor: VertexId | None = None


@dataclass(frozen=True)
class Relabel:
    vertex_map: tuple[tuple[VertexId, VertexId], ...]
    edge_map: tuple[tuple[EdgeId, EdgeId], ...] = ()

    @classmethod
    def of(cls, vertex_map: Mapping[VertexId, VertexId], edge_map: Mapping[EdgeId, EdgeId] | None = None) -> "Relabel":
        vm = tuple(sorted((a, b) for a, b in vertex_map.items() if a != b))
        em = tuple(sorted((a, b) for a, b in (edge_map or {}).items() if a != b))
        return cls(vm, em)


Move = Union[InnerBlowup, OuterBlowup, Blowdown, Relabel]
BLOWUPS = (InnerBlowup, OuterBlowup)


def _claim(g: WeightedGraph, given: str | None, prefix: str, taken: set[str], counter: int) -> tuple[str, int]:
    if given is not None:
        if given in g.vertices or given in g.edges or given in taken:
            raise MoveError(f"id {given!r} is already in use")
        taken.add(given)
        return given, counter
    while True:
        ident = f"{prefix}{counter}"
        counter += 1
        if ident not in g.vertices and ident not in g.edges and ident not in taken:
            taken.add(ident)
            return ident, counter


def inner_blowup_move(g: WeightedGraph, move: InnerBlowup) -> tuple[WeightedGraph, InnerBlowup]:
    if move.edge not in g.edges:
        raise UnknownEdgeError(f"unknown edge {move.edge!r}")
    a, b = g.edges[move.edge]
    taken: set[str] = set()
    n, c = _claim(g, move.new_vertex, "n", taken, g.counter)
    given = move.new_edges or (None, None)
    e1, c = _claim(g, given[0], "e", taken, c)
    e2, c = _claim(g, given[1], "e", taken, c)
    verts = dict(g.vertices)
    if a == b:
        verts[a] = Vertex(verts[a].weight - 4, verts[a].rational)
    else:
        verts[a] = Vertex(verts[a].weight - 1, verts[a].rational)
        verts[b] = Vertex(verts[b].weight - 1, verts[b].rational)
    verts[n] = Vertex(-1)
    edges = {k: v for k, v in g.edges.items() if k != move.edge}
    edges[e1] = (a, n)
    edges[e2] = (n, b)
    return WeightedGraph(verts, edges, c), InnerBlowup(move.edge, n, (e1, e2))


def outer_blowup_move(g: WeightedGraph, move: OuterBlowup) -> tuple[WeightedGraph, OuterBlowup]:
    if move.at not in g.vertices:
        raise UnknownVertexError(f"unknown vertex {move.at!r}")
    taken: set[str] = set()
    n, c = _claim(g, move.new_vertex, "n", taken, g.counter)
    e, c = _claim(g, move.new_edge, "e", taken, c)
    verts = dict(g.vertices)
    old = verts[move.at]
    verts[move.at] = Vertex(old.weight - 1, old.rational)
    verts[n] = Vertex(-1)
    edges = dict(g.edges)
    edges[e] = (move.at, n)
    return WeightedGraph(verts, edges, c), OuterBlowup(move.at, n, e)


def blowdown_obstruction(g: WeightedGraph, v: VertexId) -> str | None:
    """Why ``v`` cannot be blown down, or ``None`` when it can."""
    if v not in g.vertices:
        return f"unknown vertex {v!r}"
    if not g.is_rational(v):
        return "vertex is not rational"
    if g.weight(v) != -1:
        return f"vertex has weight {g.weight(v)}, not -1"
    if g.loops(v):
        return "vertex carries a loop"
    if g.degree(v) not in (1, 2):
        return f"vertex has degree {g.degree(v)}"
    return None


def blowdown_move(g: WeightedGraph, move: Blowdown) -> tuple[WeightedGraph, Blowdown]:
    v = move.vertex
    why = blowdown_obstruction(g, v)
    if why is not None:
        if v not in g.vertices:
            raise UnknownVertexError(why)
        raise MoveError(f"cannot blow down {v}: {why}")
    incident = list(g.incidence[v])
    if move.removed_edges is not None:
        if sorted(move.removed_edges) != sorted(incident):
            raise MoveError(f"recorded edges {move.removed_edges} do not match the edges at {v}")
        incident = list(move.removed_edges)
    verts = {k: d for k, d in g.vertices.items() if k != v}
    edges = {k: ab for k, ab in g.edges.items() if k not in incident}
    if len(incident) == 1:
        u = g.other_end(incident[0], v)
        verts[u] = Vertex(verts[u].weight + 1, verts[u].rational)
        return WeightedGraph(verts, edges, g.counter), Blowdown(v, None, tuple(incident), u)
    e1, e2 = incident
    u, w = g.other_end(e1, v), g.other_end(e2, v)
    if u > w:
        e1, e2, u, w = e2, e1, w, u
    taken: set[str] = set()
    e_new, c = _claim(g, move.new_edge, "e", taken, g.counter)
    if u == w:
        verts[u] = Vertex(verts[u].weight + 4, verts[u].rational)
    else:
        verts[u] = Vertex(verts[u].weight + 1, verts[u].rational)
        verts[w] = Vertex(verts[w].weight + 1, verts[w].rational)
    edges[e_new] = (u, w)
    return WeightedGraph(verts, edges, c), Blowdown(v, e_new, (e1, e2), None)


def relabel_move(g: WeightedGraph, move: Relabel) -> tuple[WeightedGraph, Relabel]:
    vmap = dict(move.vertex_map)
    emap = dict(move.edge_map)
    for v in vmap:
        if v not in g.vertices:
            raise UnknownVertexError(f"relabel of unknown vertex {v!r}")
    for e in emap:
        if e not in g.edges:
            raise UnknownEdgeError(f"relabel of unknown edge {e!r}")
    new_v = {vmap.get(v, v): d for v, d in g.vertices.items()}
    new_e = {emap.get(e, e): (vmap.get(a, a), vmap.get(b, b)) for e, (a, b) in g.edges.items()}
    if len(new_v) != len(g.vertices) or len(new_e) != len(g.edges):
        raise MoveError("relabel is not injective")
    return WeightedGraph(new_v, new_e, g.counter), move


def apply_move(g: WeightedGraph, move: Move) -> tuple[WeightedGraph, Move]:
    """Apply one move; the returned move has every created id filled in."""
    if isinstance(move, InnerBlowup):
        return inner_blowup_move(g, move)
    if isinstance(move, OuterBlowup):
        return outer_blowup_move(g, move)
    if isinstance(move, Blowdown):
        return blowdown_move(g, move)
    if isinstance(move, Relabel):
        return relabel_move(g, move)
    raise TypeError(f"not a move: {move!r}")


def inner_blowup(g: WeightedGraph, e: EdgeId) -> tuple[WeightedGraph, VertexId]:
    h, m = inner_blowup_move(g, InnerBlowup(e))
    return h, m.new_vertex


def outer_blowup(g: WeightedGraph, v: VertexId) -> tuple[WeightedGraph, VertexId]:
    h, m = outer_blowup_move(g, OuterBlowup(v))
    return h, m.new_vertex


def blowdown(g: WeightedGraph, v: VertexId) -> WeightedGraph:
    return blowdown_move(g, Blowdown(v))[0]


def inverse_move(move: Move) -> Move:
    if isinstance(move, InnerBlowup):
        if move.new_vertex is None or move.new_edges is None:
            raise MoveError("only resolved moves can be inverted")
        return Blowdown(move.new_vertex, move.edge, move.new_edges, None)
    if isinstance(move, OuterBlowup):
        if move.new_vertex is None or move.new_edge is None:
            raise MoveError("only resolved moves can be inverted")
        return Blowdown(move.new_vertex, None, (move.new_edge,), move.at)
    if isinstance(move, Blowdown):
        if move.removed_edges is None:
            raise MoveError("only resolved moves can be inverted")
        if len(move.removed_edges) == 1:
            return OuterBlowup(move.neighbor, move.vertex, move.removed_edges[0])
        return InnerBlowup(move.new_edge, move.vertex, tuple(move.removed_edges))
    if isinstance(move, Relabel):
        return Relabel(
            tuple(sorted((b, a) for a, b in move.vertex_map)),
            tuple(sorted((b, a) for a, b in move.edge_map)),
        )
    raise TypeError(f"not a move: {move!r}")


# -- sequences ---------------------------------------------------------------


@dataclass(frozen=True)
class BirationalSequence:
    start_key: bytes
    steps: tuple[Move, ...] = ()
    fingerprints: tuple[bytes, ...] = ()

    @property
    def end_key(self) -> bytes:
        return self.fingerprints[-1] if self.fingerprints else self.start_key

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: "BirationalSequence") -> "BirationalSequence":
        if other.start_key != self.end_key:
            raise SequenceError("sequences do not compose")
        return BirationalSequence(self.start_key, self.steps + other.steps, self.fingerprints + other.fingerprints)


def build_sequence(g: WeightedGraph, moves: Iterable[Move]) -> tuple[BirationalSequence, list[WeightedGraph]]:
    """Apply ``moves`` to ``g``, returning the resolved sequence and its trace."""
    trace = [g]
    steps: list[Move] = []
    for i, m in enumerate(moves):
        try:
            h, resolved = apply_move(trace[-1], m)
        except GraphError as exc:
            raise SequenceError(str(exc), i) from exc
        steps.append(resolved)
        trace.append(h)
    seq = BirationalSequence(canonical_key(g), tuple(steps), tuple(canonical_key(h) for h in trace[1:]))
    return seq, trace


def apply(g: WeightedGraph, seq: BirationalSequence) -> list[WeightedGraph]:
    """Replay ``seq`` from ``g`` and return the trace ``[g, g1, ..., gm]``."""
    if canonical_key(g) != seq.start_key:
        raise SequenceError("start graph does not match the sequence's start key")
    trace = [g]
    for i, m in enumerate(seq.steps):
        try:
            h, _ = apply_move(trace[-1], m)
        except GraphError as exc:
            raise SequenceError(str(exc), i) from exc
        if i < len(seq.fingerprints) and canonical_key(h) != seq.fingerprints[i]:
            raise SequenceError("fingerprint mismatch", i)
        trace.append(h)
    return trace


def invert(seq: BirationalSequence) -> BirationalSequence:
    keys = (seq.start_key,) + seq.fingerprints
    steps = tuple(inverse_move(m) for m in reversed(seq.steps))
    return BirationalSequence(keys[-1], steps, tuple(reversed(keys[:-1])))


def elementary_transformation(g: WeightedGraph, v: VertexId, through: EdgeId | str) -> BirationalSequence:
    """Two-step move at a 0-vertex: a blowup next to ``v`` followed by the blowdown of ``v``.

    ``through`` is an edge at ``v`` (inner form) or the string ``"outer"``.
    """
    return elementary_transformation_trace(g, v, through)[0]


def elementary_transformation_trace(
    g: WeightedGraph, v: VertexId, through: EdgeId | str
) -> tuple[BirationalSequence, list[WeightedGraph]]:
    g._check(v)
    if not g.is_rational(v) or g.weight(v) != 0:
        raise MoveError("elementary transformations need a rational 0-vertex")
    if g.loops(v) or g.degree(v) > 2:
        raise MoveError("the 0-vertex must be at most linear")
    if through == "outer":
        if g.degree(v) > 1:
            raise MoveError("the outer form needs an end or isolated 0-vertex")
        first: Move = OuterBlowup(v)
    else:
        if through not in g.incidence[v]:
            raise MoveError(f"edge {through!r} is not incident to {v}")
        if any(m > 1 for m in g.neighbors(v).values()):
            raise MoveError("the inner form needs a 0-vertex without multiple edges")
        first = InnerBlowup(through)
    return build_sequence(g, [first, Blowdown(v)])


# -- contractions ------------------------------------------------------------


@dataclass(frozen=True)
class Subgraph:
    vertices: frozenset[VertexId]
    edges: frozenset[EdgeId] = frozenset()

    @classmethod
    def induced(cls, g: WeightedGraph, vs: Iterable[VertexId]) -> "Subgraph":
        keep = frozenset(vs)
        return cls(keep, frozenset(e for e, (a, b) in g.edges.items() if a in keep and b in keep))


Path = tuple[tuple[VertexId, ...], tuple[EdgeId, ...]]


def _orient(path: Path, start: VertexId) -> Path:
    vs, es = path
    if vs[0] == start:
        return path
    return tuple(reversed(vs)), tuple(reversed(es))


@dataclass(frozen=True)
class Contraction:
    """A birational morphism given by blowdowns and relabelings only."""

    source: WeightedGraph
    sequence: BirationalSequence
    contracted: frozenset[VertexId]
    target: WeightedGraph
    vertex_map: Mapping[VertexId, VertexId]
    blowdown_order: tuple[VertexId, ...]
    edge_paths: Mapping[EdgeId, Path] = field(repr=False)

    @property
    def steps(self) -> tuple[Move, ...]:
        return self.sequence.steps

    def image(self, v: VertexId) -> VertexId | None:
        return self.vertex_map.get(v)

    def source_of(self, target_vertex: VertexId) -> VertexId:
        for s, t in self.vertex_map.items():
            if t == target_vertex:
                return s
        raise UnknownVertexError(f"{target_vertex!r} is not a vertex of the target")


def contraction(source: WeightedGraph, moves: Iterable[Move]) -> Contraction:
    """Replay blowdowns and relabelings from ``source`` and record what they do."""
    moves = list(moves)
    for i, m in enumerate(moves):
        if isinstance(m, BLOWUPS):
            raise SequenceError("a contraction cannot contain blowups", i)
    seq, trace = build_sequence(source, moves)
    to_src = {v: v for v in source.vertices}
    paths: dict[EdgeId, Path] = {e: ((a, b), (e,)) for e, (a, b) in source.edges.items()}
    order: list[VertexId] = []
    for g, m in zip(trace, seq.steps):
        if isinstance(m, Blowdown):
            v = m.vertex
            order.append(to_src[v])
            removed = m.removed_edges
            if len(removed) == 2:
                e1, e2 = removed
                u = g.other_end(e1, v)
                p1 = _orient(paths[e1], to_src[u])
                p2 = _orient(paths[e2], to_src[v])
                paths[m.new_edge] = (p1[0] + p2[0][1:], p1[1] + p2[1])
            for e in removed:
                del paths[e]
            del to_src[v]
        else:
            vmap, emap = dict(m.vertex_map), dict(m.edge_map)
            to_src = {vmap.get(v, v): s for v, s in to_src.items()}
            paths = {emap.get(e, e): p for e, p in paths.items()}
    target = trace[-1]
    fixed = {}
    for e, p in paths.items():
        a, _ = target.edges[e]
        fixed[e] = _orient(p, to_src[a])
    return Contraction(
        source,
        seq,
        frozenset(source.vertices) - set(to_src.values()),
        target,
        {s: t for t, s in to_src.items()},
        tuple(order),
        fixed,
    )


def identity(g: WeightedGraph) -> Contraction:
    return contraction(g, [])


def greedy_blowdowns(
    source: WeightedGraph, vertices: Iterable[VertexId]
) -> tuple[list[Move], WeightedGraph]:
    """Blow down exactly ``vertices`` in some valid order (smallest ready id first)."""
    pending = set(vertices)
    for v in pending:
        source._check(v)
    g = source
    moves: list[Move] = []
    while pending:
        ready = sorted(v for v in pending if blowdown_obstruction(g, v) is None)
        if not ready:
            raise MoveError(f"vertices {sorted(pending)} cannot be contracted")
        g, m = blowdown_move(g, Blowdown(ready[0]))
        moves.append(m)
        pending.discard(ready[0])
    return moves, g


def alignment(g: WeightedGraph, target: WeightedGraph, vertex_map: Mapping[VertexId, VertexId]) -> Relabel:
    """Relabel turning ``g`` into exactly ``target`` along ``vertex_map``."""
    if sorted(vertex_map) != sorted(g.vertices) or sorted(vertex_map.values()) != sorted(target.vertices):
        raise GraphError("vertex map is not a bijection onto the target")
    for v, t in vertex_map.items():
        if g.vertices[v] != target.vertices[t]:
            raise GraphError(f"vertex {v} does not match {t}: {g.vertices[v]} vs {target.vertices[t]}")
    groups: dict[tuple, list[EdgeId]] = {}
    for e, (a, b) in g.edges.items():
        groups.setdefault(tuple(sorted((vertex_map[a], vertex_map[b]))), []).append(e)
    tgroups: dict[tuple, list[EdgeId]] = {}
    for e, (a, b) in target.edges.items():
        tgroups.setdefault((a, b), []).append(e)
    if {k: len(v) for k, v in groups.items()} != {k: len(v) for k, v in tgroups.items()}:
        raise GraphError("edge multiplicities do not match the target")
    emap = {}
    for k, es in groups.items():
        for e, f in zip(sorted(es), sorted(tgroups[k])):
            emap[e] = f
    return Relabel.of(vertex_map, emap)


def contraction_from_set(
    source: WeightedGraph,
    vertices: Iterable[VertexId],
    target: WeightedGraph | None = None,
    vertex_map: Mapping[VertexId, VertexId] | None = None,
) -> Contraction:
    """Contract a vertex set; optionally rename the result onto ``target``."""
    moves, g = greedy_blowdowns(source, vertices)
    if target is not None:
        vmap = {v: (vertex_map or {}).get(v, v) for v in g.vertices}
        relabel = alignment(g, target, vmap)
        if relabel.vertex_map or relabel.edge_map:
            moves.append(relabel)
    return contraction(source, moves)


def compose(p: Contraction, q: Contraction) -> Contraction:
    """``q`` after ``p``; ``q.source`` must equal ``p.target``."""
    if q.source != p.target:
        raise GraphError("contractions do not compose")
    back = {t: s for s, t in p.vertex_map.items()}
    contracted = set(p.contracted) | {back[x] for x in q.contracted}
    vmap = {s: q.vertex_map[t] for s, t in p.vertex_map.items() if t in q.vertex_map}
    return contraction_from_set(p.source, contracted, q.target, vmap)


def restrict_preserving(p: Contraction, v: VertexId) -> Contraction:
    """The longest run of ``p``'s blowdowns that can be replayed without touching ``v``."""
    p.source._check(v)
    if v not in p.contracted:
        return p
    pending = [x for x in p.blowdown_order if x != v]
    g = p.source
    moves: list[Move] = []
    progress = True
    while progress:
        progress = False
        for x in pending:
            if blowdown_obstruction(g, x) is None:
                g, m = blowdown_move(g, Blowdown(x))
                moves.append(m)
                pending.remove(x)
                progress = True
                break
    return contraction(p.source, moves)


def preimage_subgraph(p: Contraction, sub: Subgraph) -> Subgraph:
    t = p.target
    for v in sub.vertices:
        t._check(v)
    for e in sub.edges:
        if e not in t.edges:
            raise UnknownEdgeError(f"unknown edge {e!r}")
        a, b = t.edges[e]
        if a not in sub.vertices or b not in sub.vertices:
            raise GraphError(f"edge {e} leaves the subgraph")
    back = {tv: s for s, tv in p.vertex_map.items()}
    verts = {back[v] for v in sub.vertices}
    edges: set[EdgeId] = set()
    for e in sub.edges:
        vs, es = p.edge_paths[e]
        verts.update(vs)
        edges.update(es)
    return Subgraph(frozenset(verts), frozenset(edges))


def are_equivalent_morphisms(p1: Contraction, p2: Contraction) -> bool:
    if p1.source != p2.source:
        raise GraphError("morphisms have different sources")
    return p1.contracted == p2.contracted
