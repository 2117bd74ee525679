"""Decision procedures built on segments: rigidity, unique minimal models, enumeration, triangulation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import (
    GraphError,
    SegmentReport,
    VertexId,
    WeightedGraph,
    canonical_key,
    contractible_sites,
    is_connected,
    is_minimal,
    segments,
    validate,
)
from .minimality import minimal_model
from .moves import (
    BirationalSequence,
    Blowdown,
    InnerBlowup,
    MoveError,
    OuterBlowup,
    apply_move,
    blowdown,
    inner_blowup,
    outer_blowup,
)
from .standard import StandardForm, reduce_extremal_segment, standard_form

__all__ = [
    "RigidityVerdict",
    "SegmentFailure",
    "StandardForm",
    "Enumeration",
    "Triangulation",
    "a1_witness",
    "enumerate_minimal_models",
    "has_unique_minimal_model",
    "is_admissible_mod_earrings",
    "is_birationally_rigid",
    "is_surface_rigid",
    "standard_form",
    "triangulate_circular",
]


def _require_minimal(g: WeightedGraph) -> None:
    bad = validate(g)
    if bad:
        raise GraphError(f"graph fails validation: {bad[0].detail}")
    if not is_minimal(g):
        raise GraphError(f"graph is not minimal: {contractible_sites(g)[0]} can be blown down")


def _require_minimal_connected(g: WeightedGraph) -> None:
    _require_minimal(g)
    if not is_connected(g):
        raise GraphError("graph must be connected")


def is_birationally_rigid(g: WeightedGraph) -> bool:
    _require_minimal(g)
    return all(s.admissible for s in segments(g))


@dataclass(frozen=True)
class SegmentFailure:
    segment: SegmentReport
    reason: str

    def as_dict(self) -> dict:
        return {"segment": self.segment.as_dict(), "reason": self.reason}


@dataclass(frozen=True)
class RigidityVerdict:
    surface_rigid: bool
    birationally_rigid: bool
    witnesses: tuple[SegmentFailure, ...] = ()
    a1_sequence: BirationalSequence | None = None

    def as_dict(self) -> dict:
        return {
            "surface_rigid": self.surface_rigid,
            "birationally_rigid": self.birationally_rigid,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "a1_sequence_length": None if self.a1_sequence is None else len(self.a1_sequence),
        }


def _failure_reason(s: SegmentReport) -> str:
    kind = "extremal linear" if s.shape == "linear" and s.extremal else f"{s.position} {s.shape}"
    if s.is_earring:
        kind = "earring"
    return f"{kind} segment is not admissible"


def _extremal_failures(g: WeightedGraph) -> list[SegmentReport]:
    return sorted(
        (s for s in segments(g) if s.shape == "linear" and s.extremal and not s.admissible),
        key=lambda s: s.vertices,
    )


def is_surface_rigid(g: WeightedGraph) -> RigidityVerdict:
    """Surface rigidity holds exactly when every extremal linear segment is admissible.

    A failing verdict carries a sequence to a graph with a free (0)-tip.
    """
    bad = validate(g, require_connected=True, surface_mode=True)
    if bad:
        raise GraphError(f"graph fails validation: {bad[0].detail}")
    _require_minimal(g)
    segs = segments(g)
    failures = tuple(
        SegmentFailure(s, _failure_reason(s)) for s in sorted(segs, key=lambda s: s.vertices) if not s.admissible
    )
    birational = not failures
    witness = a1_witness(g)
    return RigidityVerdict(witness is None, birational, failures, witness)


def a1_witness(g: WeightedGraph) -> BirationalSequence | None:
    """Reduce the first non-admissible extremal linear segment until it ends in a free (0)-vertex."""
    _require_minimal_connected(g)
    failing = _extremal_failures(g)
    if not failing:
        return None
    seq, _, _ = reduce_extremal_segment(g, list(failing[0].vertices))
    return seq


def is_admissible_mod_earrings(g: WeightedGraph) -> bool:
    _require_minimal(g)
    return all(s.admissible or s.is_earring for s in segments(g))


def _is_two_cycle(g: WeightedGraph) -> tuple[int, int] | None:
    # ((a, b)): two rational vertices joined by a double edge, no loops
    if len(g) != 2 or len(g.edges) != 2:
        return None
    a, b = sorted(g.vertices)
    if g.multiplicity(a, b) != 2 or not (g.is_rational(a) and g.is_rational(b)):
        return None
    lo, hi = sorted((g.weight(a), g.weight(b)))
    return lo, hi


def _is_single(g: WeightedGraph, weight: int, loops: int) -> bool:
    if len(g) != 1:
        return False
    (v,) = g.vertices
    return g.is_rational(v) and g.weight(v) == weight and g.loops(v) == loops and len(g.edges) == loops


def has_unique_minimal_model(g: WeightedGraph) -> bool:
    _require_minimal_connected(g)
    if is_admissible_mod_earrings(g):
        return True
    if _is_single(g, 0, 0) or _is_single(g, 3, 1) or _is_single(g, 4, 1):
        return True
    pair = _is_two_cycle(g)
    if pair is None:
        return False
    # The exceptional list is often quoted as ((0, m)) with m <= 0.  ((0, -1)) is
    # not minimal, so on minimal inputs that reads as m <= -2 together with ((0, 0)).
    lo, hi = pair
    return (hi == 0 and lo <= -2) or pair == (0, 0)


# -- enumeration -------------------------------------------------------------

STATE_LIMIT = 200_000


@dataclass(frozen=True)
class Enumeration:
    classes: dict[bytes, WeightedGraph]
    complete: bool
    reason: str
    states: int
    bounds: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)


def _pump_directions(g: WeightedGraph, v: VertexId) -> list[str]:
    if not g.is_rational(v) or g.weight(v) != 0 or g.loops(v) or not 1 <= g.degree(v) <= 2:
        return []
    out = list(g.incidence[v])
    if g.degree(v) == 1:
        out.append("outer")
    return out


def _pump_step(g: WeightedGraph, v: VertexId, through: str) -> tuple[WeightedGraph, VertexId, str]:
    """One elementary transformation at ``v``; returns the new graph, the new (0)-vertex and the edge to push through next."""
    if through == "outer":
        g, m = apply_move(g, OuterBlowup(v))
        g, _ = apply_move(g, Blowdown(v))
        return g, m.new_vertex, "outer"
    far = g.other_end(through, v)
    g, m = apply_move(g, InnerBlowup(through))
    g, _ = apply_move(g, Blowdown(v))
    # the new 0-vertex keeps the edge toward the same far vertex
    nxt = next(e for e in g.incidence[m.new_vertex] if g.other_end(e, m.new_vertex) == far)
    return g, m.new_vertex, nxt


def _pump(g: WeightedGraph, depth: int) -> tuple[list[WeightedGraph], bool]:
    """Minimal models of every pump branch; the flag says whether all branches stayed in one class."""
    found: list[WeightedGraph] = []
    stable = True
    for v in sorted(g.vertices):
        for through in _pump_directions(g, v):
            cur, tip, edge = g, v, through
            keys = []
            for _ in range(depth):
                try:
                    cur, tip, edge = _pump_step(cur, tip, edge)
                except MoveError:
                    break
                if validate(cur):
                    break
                m, _ = minimal_model(cur)
                found.append(m)
                keys.append(canonical_key(m))
            if len(set(keys)) > 1:
                stable = False
    return found, stable


def _successors(g: WeightedGraph, max_size: int) -> list[WeightedGraph]:
    out = [blowdown(g, v) for v in contractible_sites(g)]
    if len(g) < max_size:
        out += [inner_blowup(g, e)[0] for e in sorted(g.edges)]
        out += [outer_blowup(g, v)[0] for v in sorted(g.vertices)]
    return out


def enumerate_minimal_models(
    g: WeightedGraph,
    *,
    max_weight_pump: int = 4,
    max_graph_size: int | None = None,
    max_results: int | None = None,
) -> Enumeration:
    """Collect minimal graphs birationally equivalent to ``g`` up to isomorphism.

    Two sources feed the result: pumping weight through every (0)-vertex of
    degree 1 or 2 followed by contraction, and a breadth-first search over
    single blowups and blowdowns inside a size and weight box.  ``complete``
    means the box was searched to exhaustion, no result cap was hit and every
    pump branch stayed inside one class.  It says nothing about graphs larger
    than the box.
    """
    bad = validate(g)
    if bad:
        raise GraphError(f"graph fails validation: {bad[0].detail}")
    start, _ = minimal_model(g)
    size = max_graph_size if max_graph_size is not None else len(start) + 2
    weight = max((abs(d.weight) for d in start.vertices.values()), default=0) + max_weight_pump
    classes: dict[bytes, WeightedGraph] = {}

    def add(h: WeightedGraph) -> bool:
        k = canonical_key(h)
        if k not in classes:
            classes[k] = h
        return max_results is not None and len(classes) >= max_results

    add(start)
    pumped, stable = _pump(start, max_weight_pump)
    capped = any(add(h) for h in pumped)
    seen = {canonical_key(start)}
    queue = deque([start])
    exhausted = True
    while queue and not capped:
        if len(seen) > STATE_LIMIT:
            exhausted = False
            break
        h = queue.popleft()
        for x in _successors(h, size):
            if max(abs(d.weight) for d in x.vertices.values()) > weight:
                continue
            k = canonical_key(x)
            if k in seen:
                continue
            seen.add(k)
            queue.append(x)
            if is_minimal(x) and add(x):
                capped = True
                break
    if capped:
        reason = "result cap reached"
    elif not exhausted:
        reason = "state limit reached"
    elif not stable:
        reason = "pumping keeps producing new classes"
    else:
        reason = "search closed within bounds"
    complete = exhausted and stable and not capped
    ordered = dict(sorted(classes.items()))
    return Enumeration(ordered, complete, reason, len(seen), {"max_graph_size": size, "max_weight": weight})


# -- triangulations ----------------------------------------------------------


@dataclass(frozen=True)
class Triangulation:
    boundary_order: tuple[VertexId, ...]
    triangles: tuple[tuple[VertexId, VertexId, VertexId], ...]
    incidence_tree: dict[int, tuple[int, ...]]

    def degree(self, v: VertexId) -> int:
        """Number of edges at ``v`` in the triangulated disc."""
        nbrs = set()
        for t in self.triangles:
            if v in t:
                nbrs.update(u for u in t if u != v)
        return len(nbrs)

    def as_dict(self) -> dict:
        return {
            "boundary_order": list(self.boundary_order),
            "triangles": [list(t) for t in self.triangles],
            "incidence_tree": {str(k): list(v) for k, v in self.incidence_tree.items()},
        }


def _is_circular_graph(g: WeightedGraph) -> bool:
    return len(g) > 0 and is_connected(g) and all(g.degree(v) == 2 for v in g.vertices)


def _boundary(g: WeightedGraph) -> list[VertexId]:
    start = min(g.vertices)
    order = [start]
    prev, cur = None, start
    while len(order) < len(g):
        nxt = sorted(u for u in g.neighbors(cur) if u != prev and u not in order)
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def triangulate_circular(g: WeightedGraph) -> Triangulation | None:
    """Find a disc triangulation on the cycle whose degree-k vertices weigh -k+1.

    Ears of a triangulated polygon are exactly its (-1)-vertices, so peeling
    (-1)-vertices by blowdowns in any order either reaches ((-1,-1,-1)) or shows
    no triangulation exists.  Ears are taken smallest id first.
    """
    if not _is_circular_graph(g):
        raise GraphError("triangulations are defined for circular graphs only")
    if not all(g.is_rational(v) for v in g.vertices):
        raise GraphError("every vertex of a triangulated cycle must be rational")
    if len(g) < 3:
        return None
    boundary = _boundary(g)
    ring = list(boundary)
    cur = g
    triangles = []
    while len(ring) > 3:
        ears = sorted(v for v in ring if cur.weight(v) == -1)
        if not ears:
            return None
        v = ears[0]
        i = ring.index(v)
        triangles.append((ring[i - 1], v, ring[(i + 1) % len(ring)]))
        cur = blowdown(cur, v)
        ring.pop(i)
    if any(cur.weight(v) != -1 for v in ring):
        return None
    triangles.append(tuple(ring))
    adjacency = {
        i: tuple(j for j, t in enumerate(triangles) if j != i and len(set(s) & set(t)) == 2)
        for i, s in enumerate(triangles)
    }
    tri = Triangulation(tuple(boundary), tuple(triangles), adjacency)
    if any(g.weight(v) != 1 - tri.degree(v) for v in boundary):
        raise GraphError("peeling produced a triangulation violating the weight law")
    return tri

