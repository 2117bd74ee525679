"""Contractibility, minimal models, dominations and relatively minimal diagrams."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .graph import (
    GraphError,
    VertexId,
    WeightedGraph,
    branches_at,
    branching_set,
    components,
    contractible_sites,
    is_connected,
    is_tree,
    segments,
    validate,
)
from .moves import (
    BirationalSequence,
    Blowdown,
    Contraction,
    InnerBlowup,
    Move,
    OuterBlowup,
    Relabel,
    apply_move,
    blowdown_move,
    contraction,
    contraction_from_set,
    identity,
)
from .quadform import discriminant, is_negative_definite


def _require_connected(g: WeightedGraph) -> None:
    if not is_connected(g):
        raise GraphError("expected a connected graph")


def contraction_trace(g: WeightedGraph) -> list[WeightedGraph]:
    """Graphs visited by greedy smallest-id contraction of (-1)-vertices."""
    trace = [g]
    while len(g) > 1:
        sites = contractible_sites(g)
        if not sites:
            break
        g = blowdown_move(g, Blowdown(sites[0]))[0]
        trace.append(g)
    return trace


def is_contractible(g: WeightedGraph) -> bool:
    """Whether ``g`` blows down to one loop-free rational (-1)-vertex.

    Any contraction of an at most linear (-1)-vertex of a contractible graph stays
    contractible, so the greedy order decides the question.
    """
    _require_connected(g)
    last = contraction_trace(g)[-1]
    if len(last) != 1:
        return False
    (v,) = last.vertices
    return last.is_rational(v) and last.weight(v) == -1 and not last.edges


def is_contractible_numeric(g: WeightedGraph) -> bool:
    _require_connected(g)
    return (
        is_tree(g)
        and all(d.rational for d in g.vertices.values())
        and is_negative_definite(g)
        and discriminant(g) == 1
    )


# -- minimal models ----------------------------------------------------------

Policy = Union[str, Sequence[VertexId], Callable[[WeightedGraph, list], VertexId]]


def _chooser(policy: Policy, seed: int | None) -> Callable[[WeightedGraph, list[VertexId]], VertexId]:
    if callable(policy):
        return policy
    if policy in ("min-id", None):
        return lambda g, sites: sites[0]
    if policy == "max-id":
        return lambda g, sites: sites[-1]
    if policy == "random":
        rng = random.Random(seed)
        return lambda g, sites: rng.choice(sites)
    if isinstance(policy, str):
        policy = [p for p in policy.split(",") if p]
    rank = {v: i for i, v in enumerate(policy)}
    return lambda g, sites: min(sites, key=lambda v: (rank.get(v, len(rank)), v))


def minimal_model(
    g: WeightedGraph, policy: Policy = "min-id", seed: int | None = None
) -> tuple[WeightedGraph, Contraction]:
    """Contract at most linear (-1)-vertices until none is left.

    ``policy`` picks the next vertex among the current candidates: ``"min-id"``,
    ``"max-id"``, ``"random"`` (with ``seed``), an id priority list (or a
    comma-separated string of ids), or a callable ``(graph, sites) -> id``.
    """
    bad = validate(g)
    if bad:
        raise GraphError(f"graph fails validation: {bad[0].detail}")
    choose = _chooser(policy, seed)
    cur = g
    moves: list[Move] = []
    while True:
        sites = contractible_sites(cur)
        if not sites:
            break
        v = choose(cur, sites)
        if v not in sites:
            raise GraphError(f"policy chose {v!r}, which cannot be blown down")
        cur, m = blowdown_move(cur, Blowdown(v))
        moves.append(m)
    p = contraction(g, moves)
    return p.target, p


# -- diagrams ----------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    top: WeightedGraph
    p1: Contraction
    p2: Contraction

    def __post_init__(self) -> None:
        if self.p1.source != self.top or self.p2.source != self.top:
            raise GraphError("both contractions must start at the top graph")

    @property
    def common_contractible(self) -> list[VertexId]:
        both = self.p1.contracted & self.p2.contracted
        return [v for v in contractible_sites(self.top) if v in both]

    @property
    def relatively_minimal(self) -> bool:
        both = self.p1.contracted & self.p2.contracted
        return not any(self.top.weight(v) == -1 for v in both)


Site = tuple[str, str]


def _site_move(site: Site) -> Move:
    kind, where = site
    if kind == "inner":
        return InnerBlowup(where)
    if kind == "outer":
        return OuterBlowup(where)
    raise GraphError(f"unknown blowup site kind {kind!r}")


def complete_square(g0: WeightedGraph, site_a: Site, site_b: Site) -> tuple[WeightedGraph, Contraction, Contraction]:
    """Perform both blowups at once.

    ``pa`` contracts the vertex made by ``site_b`` (landing on the ``site_a``
    blowup) and ``pb`` the one made by ``site_a``.  Two inner blowups of the same
    edge are one blowup, so both maps are then the identity.
    """
    ga, ma = apply_move(g0, _site_move(site_a))
    if site_a == site_b and site_a[0] == "inner":
        return ga, identity(ga), identity(ga)
    g, mb = apply_move(ga, _site_move(site_b))
    return g, contraction_from_set(g, [mb.new_vertex]), contraction_from_set(g, [ma.new_vertex])


def _last_contracted(q: Contraction, interior: Iterable[VertexId]) -> VertexId:
    pos = {v: i for i, v in enumerate(q.blowdown_order)}
    return max(interior, key=lambda v: pos[v])


def dominate(start: WeightedGraph, steps: BirationalSequence | Iterable[Move]) -> Diagram:
    """A graph dominating both ends of a birational sequence.

    Keeps a top graph ``T`` with ``q1: T -> start`` and ``q2: T -> current``.
    Blowdowns and relabelings only extend ``q2``.  A blowup of the current graph
    either restores a vertex that ``q2`` had contracted (an inner blowup of an
    edge made by contractions, or an outer blowup reusing a contracted vertex's
    id next to its old neighbor) or is lifted to ``T`` as a fresh blowup that
    ``q1`` also contracts.
    """
    moves = steps.steps if isinstance(steps, BirationalSequence) else list(steps)
    top = start
    q1 = identity(start)
    q2 = q1
    cur = start
    for m in moves:
        cur, m = apply_move(cur, m)
        back = {t: s for s, t in q2.vertex_map.items()}
        if isinstance(m, Blowdown):
            vmap = {s: t for s, t in q2.vertex_map.items() if t != m.vertex}
            q2 = contraction_from_set(top, q2.contracted | {back[m.vertex]}, cur, vmap)
        elif isinstance(m, Relabel):
            rv = dict(m.vertex_map)
            vmap = {s: rv.get(t, t) for s, t in q2.vertex_map.items()}
            q2 = contraction_from_set(top, q2.contracted, cur, vmap)
        elif isinstance(m, InnerBlowup):
            vs, _ = q2.edge_paths[m.edge]
            if len(vs) > 2:
                y = _last_contracted(q2, vs[1:-1])
                vmap = dict(q2.vertex_map)
                vmap[y] = m.new_vertex
                q2 = contraction_from_set(top, q2.contracted - {y}, cur, vmap)
            else:
                (e_top,) = q2.edge_paths[m.edge][1]
                top, lifted = apply_move(top, InnerBlowup(e_top))
                q1 = contraction_from_set(top, q1.contracted | {lifted.new_vertex}, q1.target, q1.vertex_map)
                vmap = dict(q2.vertex_map)
                vmap[lifted.new_vertex] = m.new_vertex
                q2 = contraction_from_set(top, q2.contracted, cur, vmap)
        else:
            anchor = back[m.at]
            reuse = m.new_vertex in q2.contracted and m.new_vertex in top.neighbors(anchor)
            if reuse:
                vmap = dict(q2.vertex_map)
                vmap[m.new_vertex] = m.new_vertex
                try:
                    q2 = contraction_from_set(top, q2.contracted - {m.new_vertex}, cur, vmap)
                    continue
                except GraphError:
                    pass
            top, lifted = apply_move(top, OuterBlowup(anchor))
            q1 = contraction_from_set(top, q1.contracted | {lifted.new_vertex}, q1.target, q1.vertex_map)
            vmap = dict(q2.vertex_map)
            vmap[lifted.new_vertex] = m.new_vertex
            q2 = contraction_from_set(top, q2.contracted, cur, vmap)
    return Diagram(top, q1, q2)


def relatively_minimize(d: Diagram) -> Diagram:
    """Blow down (-1)-vertices of the top that both sides contract, smallest id first."""
    while True:
        common = d.common_contractible
        if not common:
            return d
        v = common[0]
        top, _ = blowdown_move(d.top, Blowdown(v))
        d = Diagram(
            top,
            contraction_from_set(top, d.p1.contracted - {v}, d.p1.target, _survivors(d.p1, top)),
            contraction_from_set(top, d.p2.contracted - {v}, d.p2.target, _survivors(d.p2, top)),
        )


def _survivors(p: Contraction, top: WeightedGraph) -> dict[VertexId, VertexId]:
    return {s: t for s, t in p.vertex_map.items() if s in top.vertices}


# -- the graph lemma ---------------------------------------------------------


@dataclass
class ClauseResult:
    passed: bool
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "witnesses": self.witnesses}


@dataclass
class GraphLemmaReport:
    branching: list[VertexId]
    a: ClauseResult
    b: ClauseResult
    c: ClauseResult

    @property
    def passed(self) -> bool:
        return self.a.passed and self.b.passed and self.c.passed

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "branching": self.branching,
            "a": self.a.as_dict(),
            "b": self.b.as_dict(),
            "c": self.c.as_dict(),
        }


def _segment_class(report) -> str:
    if report.shape == "circular":
        return "circular"
    return "linear-extremal" if report.extremal else "linear-inner"


def _segment_index(g: WeightedGraph) -> dict[VertexId, object]:
    return {v: s for s in segments(g) for v in s.vertices}


def check_graph_lemma(d: Diagram) -> GraphLemmaReport:
    """Check the branching, segment and witness clauses on a relatively minimal diagram."""
    from .graph import is_minimal

    if not d.relatively_minimal:
        raise GraphError("diagram is not relatively minimal")
    if not is_minimal(d.p1.target) or not is_minimal(d.p2.target):
        raise GraphError("both ends of the diagram must be minimal")
    top, sides = d.top, (d.p1, d.p2)
    br_top = branching_set(top)
    back = [{t: s for s, t in p.vertex_map.items()} for p in sides]
    br_sides = [frozenset(back[i][t] for t in branching_set(p.target)) for i, p in enumerate(sides)]
    b1, b2 = br_sides

    # (a) branching sets agree and keep their degrees
    wa = []
    for i, p in enumerate(sides):
        expect = frozenset(v for v in br_top if v in p.vertex_map)
        if br_sides[i] != expect:
            wa.append({"side": i + 1, "branching": sorted(br_sides[i]), "expected": sorted(expect)})
    if b1 != b2:
        wa.append({"side": 0, "detail": "branching sets differ", "p1": sorted(b1), "p2": sorted(b2)})
    B = b1 & b2
    for v in sorted(B):
        degs = [top.degree(v)] + [p.target.degree(p.vertex_map[v]) for p in sides]
        if len(set(degs)) != 1:
            wa.append({"vertex": v, "degrees": degs})
    clause_a = ClauseResult(not wa, wa)

    # (b) components of top minus B go to segments, bijectively and class by class
    wb = []
    images: list[dict[int, frozenset]] = [{}, {}]
    comps = components(top, removed=B)
    seg_lists = [segments(p.target) for p in sides]
    for k, comp in enumerate(comps):
        classes = []
        for i, p in enumerate(sides):
            img = frozenset(p.vertex_map[v] for v in comp if v in p.vertex_map)
            match = [s for s in seg_lists[i] if frozenset(s.vertices) == img]
            if not match:
                wb.append({"component": comp, "side": i + 1, "image": sorted(img), "detail": "image is not a segment"})
                classes.append(None)
            else:
                images[i][k] = img
                classes.append(_segment_class(match[0]))
        if None not in classes and classes[0] != classes[1]:
            wb.append({"component": comp, "classes": classes})
    for i in range(2):
        if len(images[i]) != len(seg_lists[i]) or len(set(images[i].values())) != len(images[i]):
            wb.append({"side": i + 1, "detail": "components and segments are not in bijection"})
    clause_b = ClauseResult(not wb, wb)

    # (c) each new branching vertex has three simple branches, one contracted on each side
    wc = []
    ok_c = True
    for v in sorted(br_top - B):
        entry = {"vertex": v, "degree": top.degree(v), "rational": top.is_rational(v)}
        branches = branches_at(top, v)
        entry["branches"] = [sorted(b.vertices) for b in branches]
        good = top.is_rational(v) and top.degree(v) == 3 and len(branches) == 3 and all(b.simple for b in branches)
        for i, p in enumerate(sides):
            found = None
            if v in p.contracted:
                idx = _segment_index(p.target)
                for w1 in branches:
                    if not w1.vertices <= p.contracted:
                        continue
                    for w2 in branches:
                        if w2 is w1:
                            continue
                        img = {p.vertex_map[x] for x in w2.vertices if x in p.vertex_map}
                        segs = {idx[x].vertices for x in img if x in idx}
                        if len(segs) != 1 or not img:
                            continue
                        seg = idx[next(iter(img))]
                        if set(img) <= set(seg.vertices) and seg.shape == "linear" and seg.extremal and not seg.admissible:
                            found = (sorted(w1.vertices), sorted(w2.vertices), list(seg.vertices))
                            break
                    if found:
                        break
            if found is None:
                good = False
            else:
                entry[f"p{i + 1}"] = {"contracted_branch": found[0], "mapped_branch": found[1], "segment": found[2]}
        entry["passed"] = good
        ok_c = ok_c and good
        wc.append(entry)
    clause_c = ClauseResult(ok_c, wc)
    return GraphLemmaReport(sorted(B), clause_a, clause_b, clause_c)
