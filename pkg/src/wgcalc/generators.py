"""Seeded random graphs, move sequences and diagrams for tests and the CLI."""

from __future__ import annotations

import random

from .graph import Vertex, WeightedGraph, contractible_sites, is_minimal, validate
from .minimality import Diagram, minimal_model, relatively_minimize
from .moves import (
    BirationalSequence,
    Blowdown,
    InnerBlowup,
    Move,
    OuterBlowup,
    build_sequence,
)


def random_graph(
    rng: random.Random,
    max_vertices: int = 8,
    weights: tuple[int, int] = (-5, 5),
    max_loops: int = 2,
    max_multiplicity: int = 3,
    connected: bool = False,
    edge_probability: float = 0.35,
    nonrational_probability: float = 0.0,
) -> WeightedGraph:
    n = rng.randint(1, max_vertices)
    ids = [f"v{i}" for i in range(n)]
    verts = {
        v: Vertex(rng.randint(*weights), rng.random() >= nonrational_probability) for v in ids
    }
    edges: list[tuple[str, str]] = []
    if connected:
        for i in range(1, n):
            edges.append((ids[rng.randrange(i)], ids[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_probability:
                have = sum(1 for e in edges if e == (ids[i], ids[j]))
                extra = rng.randint(1, max_multiplicity) - have
                edges += [(ids[i], ids[j])] * max(extra, 0)
    for _ in range(rng.randint(0, max_loops)):
        v = rng.choice(ids)
        edges.append((v, v))
    return WeightedGraph.build(verts, edges)


def random_move(rng: random.Random, g: WeightedGraph, blowdown_bias: float = 0.4) -> Move:
    # an isolated (-1)-vertex counts as contractible but has no blowdown
    sites = [v for v in contractible_sites(g) if g.degree(v) > 0]
    if sites and rng.random() < blowdown_bias:
        return Blowdown(rng.choice(sites))
    if g.edges and rng.random() < 0.6:
        return InnerBlowup(rng.choice(sorted(g.edges)))
    return OuterBlowup(rng.choice(sorted(g.vertices)))


def random_sequence(
    rng: random.Random, g: WeightedGraph, length: int, blowdown_bias: float = 0.4
) -> tuple[BirationalSequence, list[WeightedGraph]]:
    moves = []
    cur = g
    for _ in range(length):
        m = random_move(rng, cur, blowdown_bias)
        seq, trace = build_sequence(cur, [m])
        moves.append(seq.steps[0])
        cur = trace[-1]
    return build_sequence(g, moves)


def random_blowups(rng: random.Random, g: WeightedGraph, k: int) -> tuple[BirationalSequence, list[WeightedGraph]]:
    moves = []
    cur = g
    for _ in range(k):
        m = random_move(rng, cur, blowdown_bias=0.0)
        seq, trace = build_sequence(cur, [m])
        moves.append(seq.steps[0])
        cur = trace[-1]
    return build_sequence(g, moves)


def random_minimal_graph(rng: random.Random, max_vertices: int = 5, weights: tuple[int, int] = (-4, 2)) -> WeightedGraph:
    """A connected minimal graph: a random one, contracted if it is not minimal already."""
    while True:
        g = random_graph(rng, max_vertices, weights, max_loops=1, max_multiplicity=2, connected=True, edge_probability=0.2)
        if validate(g):
            continue
        if not is_minimal(g):
            g, _ = minimal_model(g)
        return g


def _focused_blowup(rng: random.Random, g: WeightedGraph) -> Move:
    # blowups next to (0)- and (-1)-vertices are what make the two contractions disagree
    hot = [e for e, (a, b) in sorted(g.edges.items()) if a != b and {g.weight(a), g.weight(b)} & {0, -1}]
    if hot and rng.random() < 0.7:
        return InnerBlowup(rng.choice(hot))
    ends = [v for v in sorted(g.vertices) if g.weight(v) in (0, -1) and g.degree(v) <= 1]
    if ends and rng.random() < 0.5:
        return OuterBlowup(rng.choice(ends))
    return random_move(rng, g, blowdown_bias=0.0)


def random_diagram(rng: random.Random, base: WeightedGraph | None = None, max_blowups: int = 6) -> Diagram:
    """Blow a minimal graph up at most ``max_blowups`` times, contract the top two ways, then peel."""
    g = base if base is not None else random_minimal_graph(rng)
    top = g
    for _ in range(rng.randint(0, max_blowups)):
        _, trace = build_sequence(top, [_focused_blowup(rng, top)])
        top = trace[-1]
    _, p1 = minimal_model(top, "random", rng.randrange(2**32))
    _, p2 = minimal_model(top, "random", rng.randrange(2**32))
    return relatively_minimize(Diagram(top, p1, p2))
