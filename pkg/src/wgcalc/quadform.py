"""Intersection matrix, discriminant and inertia, all in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import GraphError, VertexId, WeightedGraph


@dataclass(frozen=True)
class IntersectionMatrix:
    order: tuple[VertexId, ...]
    entries: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Inertia:
    plus: int
    minus: int
    zero: int

    def as_dict(self) -> dict[str, int]:
        return {"plus": self.plus, "minus": self.minus, "zero": self.zero}


def intersection_matrix(g: WeightedGraph, order: Sequence[VertexId] | None = None) -> IntersectionMatrix:
    if order is None:
        order = sorted(g.vertices)
    order = tuple(order)
    if sorted(order) != sorted(g.vertices):
        raise GraphError("order must be a permutation of the vertex set")
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for v, i in index.items():
        m[i][i] = g.vertices[v].weight
    for a, b in g.edges.values():
        if a != b:
            i, j = index[a], index[b]
            m[i][j] += 1
            m[j][i] += 1
    return IntersectionMatrix(order, tuple(tuple(r) for r in m))


def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def discriminant(g: WeightedGraph) -> int:
    m = intersection_matrix(g).entries
    return bareiss_determinant([[-x for x in row] for row in m])


def inertia_of_matrix(rows: Sequence[Sequence[int]]) -> Inertia:
    """Sylvester inertia by congruence diagonalization over the rationals."""
    m = [[Fraction(x) for x in row] for row in rows]
    active = list(range(len(m)))
    plus = minus = zero = 0
    while active:
        p = next((i for i in active if m[i][i] != 0), None)
        if p is not None:
            d = m[p][p]
            if d > 0:
                plus += 1
            else:
                minus += 1
            active.remove(p)
            for i in active:
                f = m[i][p] / d
                if f:
                    for j in active:
                        m[i][j] -= f * m[p][j]
            continue
        pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
        if pair is None:
            zero += len(active)
            break
        i, j = pair
        b = m[i][j]
        plus += 1
        minus += 1
        active.remove(i)
        active.remove(j)
        updates = {
            (k, l): m[k][l] - (m[k][i] * m[j][l] + m[k][j] * m[i][l]) / b for k in active for l in active
        }
        for (k, l), val in updates.items():
            m[k][l] = val
    return Inertia(plus, minus, zero)


def inertia(g: WeightedGraph) -> Inertia:
    return inertia_of_matrix(intersection_matrix(g).entries)


def is_negative_definite(g: WeightedGraph) -> bool:
    # leading principal minors of -A must all be positive
    a = [[-x for x in row] for row in intersection_matrix(g).entries]
    n = len(a)
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return True
