"""Canonical labeling by individualization and refinement.

The search explores the refinement tree of the (weight, rationality, degree,
loop count) coloring, keeps the lexicographically least leaf encoding, and
prunes children with automorphisms discovered along the way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .graph import VertexId, WeightedGraph


@dataclass(frozen=True)
class Labeling:
    order: tuple["VertexId", ...]
    key: bytes


def _refine(colors: list[int], nbrs: list[list[tuple[int, int]]]) -> list[int]:
    ncells = len(set(colors))
    while True:
        sigs = [
            (colors[i], tuple(sorted((colors[j], m) for j, m in nbrs[i])))
            for i in range(len(colors))
        ]
        rank = {s: r for r, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncells:
            return colors
        ncells = len(rank)


def _orbit_of(v: int, gens: list[tuple[int, ...]]) -> set[int]:
    orbit = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for p in gens:
            y = p[x]
            if y not in orbit:
                orbit.add(y)
                stack.append(y)
    return orbit


def canonical_labeling(g: "WeightedGraph") -> Labeling:
    ids = sorted(g.vertices)
    n = len(ids)
    index = {v: i for i, v in enumerate(ids)}
    mult = [[0] * n for _ in range(n)]
    loops = [0] * n
    for a, b in g.edges.values():
        i, j = index[a], index[b]
        if i == j:
            loops[i] += 1
        else:
            mult[i][j] += 1
            mult[j][i] += 1
    nbrs = [[(j, mult[i][j]) for j in range(n) if mult[i][j]] for i in range(n)]
    info = [(g.vertices[v].weight, 0 if g.vertices[v].rational else 1, loops[index[v]]) for v in ids]
    deg = [sum(m for _, m in nbrs[i]) + 2 * loops[i] for i in range(n)]
    init_sig = [(info[i][0], info[i][1], deg[i], info[i][2]) for i in range(n)]
    rank0 = {s: r for r, s in enumerate(sorted(set(init_sig)))}
    colors0 = [rank0[s] for s in init_sig]

    def encode(order: list[int]) -> tuple:
        head = tuple(info[i] for i in order)
        adj = tuple(mult[order[a]][order[b]] for a in range(n) for b in range(a + 1, n))
        return head + adj

    best: list = [None, None]  # encoding, order
    autos: list[tuple[int, ...]] = []

    def search(colors: list[int], prefix: tuple[int, ...]) -> None:
        colors = _refine(colors, nbrs)
        cells: dict[int, list[int]] = {}
        for i, c in enumerate(colors):
            cells.setdefault(c, []).append(i)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(range(n), key=lambda i: colors[i])
            enc = encode(order)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, order
            elif enc == best[0]:
                perm = [0] * n
                for a, b in zip(best[1], order):
                    perm[a] = b
                autos.append(tuple(perm))
            return
        done: list[int] = []
        for v in cells[target]:
            if done:
                gens = [p for p in autos if all(p[x] == x for x in prefix)]
                if gens and any(v in _orbit_of(u, gens) for u in done):
                    continue
            child = [2 * c + (1 if c == target and i != v else 0) for i, c in enumerate(colors)]
            search(child, prefix + (v,))
            done.append(v)

    search(colors0, ())
    order = best[1]
    parts = []
    for i in order:
        w, nonrat, lp = info[i]
        parts.append(f"{w}{'*' if nonrat else ''}/{lp}")
    adj = [
        f"{a}-{b}x{mult[order[a]][order[b]]}"
        for a in range(n)
        for b in range(a + 1, n)
        if mult[order[a]][order[b]]
    ]
    key = f"{n}|{';'.join(parts)}|{','.join(adj)}".encode("ascii")
    return Labeling(tuple(ids[i] for i in order), key)
