"""Regenerate the shipped move sequences by bounded breadth-first search.

Run from the repository root: ``python3 tests/fixtures/find_sequences.py``.
The search only knows blowups, blowdowns and isomorphism classes, so the
sequences it finds are independent of the standard-form reducer.
"""

from __future__ import annotations

from collections import deque
from pathlib import Path

from wgcalc.formats import dump_sequence, parse
from wgcalc.graph import WeightedGraph, canonical_key, contractible_sites
from wgcalc.moves import Blowdown, InnerBlowup, OuterBlowup, apply_move, build_sequence

HERE = Path(__file__).parent


def _is_chain_or_cycle(g: WeightedGraph) -> bool:
    return all(g.degree(v) <= 2 for v in g.vertices)


def search(start: WeightedGraph, target: WeightedGraph, max_size: int, max_weight: int, outer: bool):
    goal = canonical_key(target)
    parent = {canonical_key(start): None}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        k = canonical_key(g)
        if k == goal:
            moves = []
            while parent[k] is not None:
                k, m = parent[k]
                moves.append(m)
            return moves[::-1]
        candidates = [Blowdown(v) for v in contractible_sites(g)]
        if len(g) < max_size:
            candidates += [InnerBlowup(e) for e in sorted(g.edges)]
            if outer:
                candidates += [OuterBlowup(v) for v in sorted(g.vertices) if g.degree(v) <= 1]
        for m in candidates:
            h, resolved = apply_move(g, m)
            if not _is_chain_or_cycle(h) or max(abs(d.weight) for d in h.vertices.values()) > max_weight:
                continue
            hk = canonical_key(h)
            if hk not in parent:
                parent[hk] = (k, resolved)
                queue.append(h)
    raise RuntimeError("target not reached within bounds")


def write(name: str, start: WeightedGraph, moves) -> None:
    seq, _ = build_sequence(start, moves)
    (HERE / name).write_text(dump_sequence(seq) + "\n")
    print(name, len(seq), "steps")


def main() -> None:
    nodal = parse("((9))")
    (loop,) = nodal.edges
    first, trace = build_sequence(nodal, [InnerBlowup(loop)])
    new_edge = sorted(trace[-1].incidence[first.steps[0].new_vertex])[0]
    head, trace = build_sequence(nodal, [InnerBlowup(loop), InnerBlowup(new_edge)])
    rest = search(trace[-1], parse("((0,0,-2,-2,-2,-2,-3))"), max_size=8, max_weight=9, outer=False)
    write("nodal_cubic.json", nodal, list(head.steps) + rest)
    for a in range(1, 6):
        target = parse("[[" + ",".join(["0", "0"] + ["-2"] * (a - 1)) + "]]")
        moves = search(parse(f"[[{a}]]"), target, max_size=a + 2, max_weight=a + 1, outer=True)
        write(f"linear_a{a}.json", parse(f"[[{a}]]"), moves)


if __name__ == "__main__":
    main()
