"""Reduction of linear and circular segments to standard form.

Both reducers work on an explicit vertex order and only use blowups, blowdowns
and elementary transformations at (0)-vertices, so every step is recorded as a
replayable move.  A zero with two distinct neighbors ``(x, 0, y)`` can be
rewritten to ``(x + t, 0, y - t)`` for any ``t``; a zero at a free tip can
shift its neighbor by any amount.  These two facts drive everything below.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import GraphError, VertexId, WeightedGraph, is_connected
from .moves import (
    BirationalSequence,
    Blowdown,
    InnerBlowup,
    Move,
    OuterBlowup,
    apply_move,
    build_sequence,
)

STEP_LIMIT = 100_000


class ReductionError(GraphError):
    """The reducer left its step budget or met an unexpected configuration."""


@dataclass(frozen=True)
class StandardForm:
    shape: str
    zeros: int
    tail: tuple[int, ...]
    order: tuple[VertexId, ...]
    graph: WeightedGraph
    reduction: BirationalSequence

    @property
    def weights(self) -> tuple[int, ...]:
        return (0,) * self.zeros + self.tail

    @property
    def shorthand(self) -> str:
        """The standard graph written in its standard reading order."""
        open_, close = ("[[", "]]") if self.shape == "linear" else ("((", "))")
        return open_ + ",".join(str(w) for w in self.weights) + close

    def as_dict(self) -> dict:
        return {
            "shape": self.shape,
            "zeros": self.zeros,
            "tail": list(self.tail),
            "weights": list(self.weights),
            "steps": len(self.reduction),
        }


# -- shape predicates --------------------------------------------------------


def is_standard_linear(ws) -> bool:
    ws = list(ws)
    z = 0
    while z < len(ws) and ws[z] == 0:
        z += 1
    if z == len(ws):
        return True
    return z % 2 == 0 and all(w <= -2 for w in ws[z:])


def _cyclic_standard_reading(ws) -> tuple[int, tuple[int, ...]] | None:
    """Zero count and tail of the best standard reading of a cyclic sequence."""
    ws = list(ws)
    n = len(ws)
    if n == 1 and ws[0] <= 2:
        # one vertex with a loop and weight at most 2 is admissible, hence rigid
        return (1, ()) if ws[0] == 0 else (0, (ws[0],))
    best = None
    for r in range(n):
        rot = ws[r:] + ws[:r]
        for seq in (rot, rot[::-1]):
            z = 0
            while z < n and seq[z] == 0:
                z += 1
            tail = tuple(seq[z:])
            ok = (
                not tail
                or (len(tail) == 1 and tail[0] <= 0)
                or (z % 2 == 0 and all(w <= -2 for w in tail))
                or (z % 2 == 0 and tail == (-1, -1))
            )
            if ok:
                cand = (-z, tail)
                if best is None or cand < best:
                    best = cand
    return None if best is None else (-best[0], best[1])


def is_standard_circular(ws) -> bool:
    return _cyclic_standard_reading(ws) is not None


# -- the working state -------------------------------------------------------


class _Work:
    def __init__(self, g: WeightedGraph, order: list[VertexId], cyclic: bool, anchor: VertexId | None = None):
        self.g = g
        self.order = list(order)
        self.cyclic = cyclic
        self.anchor = anchor
        self.moves: list[Move] = []

    @property
    def n(self) -> int:
        return len(self.order)

    def _tick(self) -> None:
        if len(self.moves) > STEP_LIMIT:
            raise ReductionError("standard-form reduction exceeded its step limit")

    def w(self, i: int) -> int:
        return self.g.weight(self.order[i % self.n])

    def weights(self) -> list[int]:
        return [self.g.weight(v) for v in self.order]

    def _do(self, move: Move) -> Move:
        self.g, m = apply_move(self.g, move)
        self.moves.append(m)
        self._tick()
        return m

    def _neighbor(self, i: int, side: int) -> VertexId:
        j = i + side
        if self.cyclic:
            return self.order[j % self.n]
        if 0 <= j < self.n:
            return self.order[j]
        if side == 1 and self.anchor is not None:
            return self.anchor
        raise ReductionError(f"position {i} has no neighbor on side {side}")

    def _edge(self, a: VertexId, b: VertexId) -> str:
        return self.g.edges_between(a, b)[0]

    def blowup_side(self, i: int, side: int) -> int:
        """Inner blowup of the edge from position ``i`` toward ``side``; returns ``i``'s new index."""
        v = self.order[i]
        m = self._do(InnerBlowup(self._edge(v, self._neighbor(i, side))))
        if side == 1:
            self.order.insert(i + 1, m.new_vertex)
            return i
        self.order.insert(i, m.new_vertex)
        return i + 1

    def lower(self, i: int, side: int) -> int:
        for _ in range(self.w(i)):
            i = self.blowup_side(i, side)
        return i

    def outer_lower(self, i: int) -> None:
        # position i is the right end of a chain with no anchor
        m = self._do(OuterBlowup(self.order[i]))
        self.order.insert(i + 1, m.new_vertex)
        for _ in range(self.w(i)):
            self.blowup_side(i, 1)

    def blowdown(self, i: int) -> None:
        self._do(Blowdown(self.order[i]))
        del self.order[i]

    def transfer(self, i: int, side: int) -> None:
        """Elementary transformation at the zero in position ``i`` through its ``side`` edge."""
        v = self.order[i]
        m = self._do(InnerBlowup(self._edge(v, self._neighbor(i, side))))
        self._do(Blowdown(v))
        self.order[i] = m.new_vertex

    def shift(self, i: int, delta_left: int) -> None:
        """Add ``delta_left`` to the left neighbor of the zero at ``i`` and take it from the right one."""
        side = 1 if delta_left > 0 else -1
        for _ in range(abs(delta_left)):
            self.transfer(i, side)

    def tip_shift(self, i: int, delta: int) -> None:
        """Change the only neighbor of the zero tip at ``i`` by ``delta``."""
        side = 1 if i == 0 else -1
        for _ in range(abs(delta)):
            v = self.order[i]
            if delta > 0:
                m = self._do(OuterBlowup(v))
            else:
                m = self._do(InnerBlowup(self._edge(v, self._neighbor(i, side))))
            self._do(Blowdown(v))
            self.order[i] = m.new_vertex

    def absorb(self, top: int) -> None:
        """Zeros fill positions ``0..top`` (``top`` even); make position ``top + 1`` zero too.

        Transfers at ``top, top - 2, ..., 2`` push the weight leftward; at ``0`` it
        either vanishes through the free tip or lands on the cyclic left neighbor.
        """
        u = self.w(top + 1)
        if u == 0:
            return
        for j in range(top, -1, -2):
            if j == 0 and not self.cyclic:
                self.tip_shift(0, -u)
            else:
                self.shift(j, u)

    def migrate_left(self, p: int) -> None:
        # (x, 0, 0) at p, p+1, p+2 becomes (0, 0, x)
        self.shift(p + 1, -self.w(p))

    def migrate_right(self, p: int) -> None:
        # (0, 0, x) at p, p+1, p+2 becomes (x, 0, 0)
        self.shift(p + 1, self.w(p + 2))

    def rotate(self, k: int) -> None:
        self.order = self.order[k:] + self.order[:k]


# -- linear ------------------------------------------------------------------


def _reduce_chain(work: _Work) -> int:
    """Run the chain reducer; returns the number of head zeros."""
    h = i = 0
    while i < work.n:
        w = work.w(i)
        if w <= -2:
            i += 1
        elif w == -1:
            if work.n == 1 and work.anchor is None:
                raise ReductionError("[[-1]] is contractible and has no standard form")
            work.blowdown(i)
            if i == 0:
                pass
            elif i - 1 < h:
                h -= 2
                i = h
            else:
                i -= 1
        elif w > 0:
            if i + 1 < work.n or work.anchor is not None:
                work.lower(i, 1)
            else:
                work.outer_lower(i)
        elif i == h:
            if i + 1 >= work.n:
                return h + 1
            work.absorb(i)
            h += 2
            i = h
        else:
            left = work.w(i - 1)
            if i + 1 < work.n or work.anchor is not None:
                work.shift(i, -left)
            else:
                work.tip_shift(i, -left)
            for p in range(i - 2, h - 1, -1):
                work.migrate_left(p)
            h += 2
            i += 1
    return h


def _orient_chain(work: _Work, h: int) -> None:
    tail = work.weights()[h:]
    if h == work.n or tuple(reversed(tail)) >= tuple(tail):
        return
    # move every zero pair to the right end, then read the chain backwards
    end = work.n
    for start in range(h - 2, -1, -2):
        for p in range(start, end - 2):
            work.migrate_right(p)
        end -= 2
    work.order.reverse()


# -- circular ----------------------------------------------------------------


def _cycle_order(g: WeightedGraph) -> list[VertexId]:
    start = min(g.vertices)
    order = [start]
    prev, cur = None, start
    while len(order) < len(g):
        nxt = sorted(u for u in g.neighbors(cur) if u != prev and u not in order)
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def _lone_nonzero(ws: list[int]) -> int | None:
    nz = [k for k, w in enumerate(ws) if w != 0]
    return nz[0] if len(nz) == 1 else None


def _reduce_cycle(work: _Work) -> None:
    while True:
        ws = work.weights()
        if is_standard_circular(ws):
            return
        if work.n == 1:
            # ((w)) with w >= 3 becomes ((w - 4, -1))
            v = work.order[0]
            m = work._do(InnerBlowup(work.g.incidence[v][0]))
            work.order.append(m.new_vertex)
            continue
        if work.n == 2:
            if max(ws) <= -1:
                work.blowdown(ws.index(-1))
                continue
            work.rotate(ws.index(max(ws)))
            work.lower(0, 1)
            continue
        if _lone_nonzero(ws) is not None:
            _pair_phase(work, 0)
            return
        p = max(range(work.n), key=lambda k: (ws[k], -k))
        if ws[p] == -1:
            work.blowdown(p)
            continue
        if ws[p] > 0:
            work.lower(p, 1)
        # the zero at p swallows its right neighbor's weight, leaving a zero pair
        work.shift(p, work.w(p + 1))
        work.rotate(p)
        _pair_phase(work, 2)
        return


def _move_block_right(work: _Work, h: int) -> None:
    # zeros 0..h-1 step over the first tail vertex: the tail turns by one
    for p in range(h - 2, -1, -2):
        work.migrate_right(p)
    work.rotate(1)


def _move_block_left(work: _Work, h: int) -> None:
    work.rotate(work.n - 1)
    for p in range(0, h, 2):
        work.migrate_left(p)


def _lower_lone(work: _Work, lone: int) -> int:
    """((0_l, x)) with x > 0: lower x into its right-hand zero; returns the new head length."""
    work.rotate(lone)
    work.lower(0, 1)
    k = 1
    while work.w(k) != 0:
        k += 1
    work.rotate(k)
    h = 0
    while work.w(h) == 0:
        h += 1
    return h


def _pair_phase(work: _Work, h: int) -> None:
    """Zeros fill positions ``0..h-1`` and the tail follows cyclically; normalize the tail.

    Work inside the tail never touches the zero block, except for absorbing a
    zero that lands next to it.  A (-1)-vertex at either end of the tail is first
    moved inside by turning the tail past the block.
    """
    while True:
        ws = work.weights()
        n = work.n
        if is_standard_circular(ws):
            return
        lone = _lone_nonzero(ws)
        if lone is not None:
            h = _lower_lone(work, lone)
            continue
        if h % 2 == 1:
            work.absorb(h - 1)
            h += 1
            continue
        tail = list(range(h, n))
        m = len(tail)
        if m == 2:
            a, b = ws[h], ws[h + 1]
            if max(a, b) >= 1:
                i = h if a >= b else h + 1
                work.lower(i, 1 if i == h else -1)
            else:
                # (-1, b) with b <= -2: the blowdown hands +1 to the block, which passes it on to b
                if a == -1:
                    # the +1 lands on the block's last zero and walks left around to b
                    work.blowdown(h)
                    for j in range(h - 2, -1, -2):
                        work.shift(j, 1)
                else:
                    # the +1 lands on the block's first zero and walks right on to a
                    work.blowdown(h + 1)
                    for j in range(1, h, 2):
                        work.shift(j, -1)
            continue
        minus = [i for i in tail if ws[i] == -1]
        plus = [i for i in tail if ws[i] >= 1]
        zero = [i for i in tail if ws[i] == 0]
        if zero:
            i = zero[0]
            if i == h:
                work.absorb(h)
                h += 2
            elif i == n - 1:
                work.rotate(i)
                h += 1
            else:
                work.shift(i, -ws[i - 1])
                for p in range(i - 2, h - 1, -1):
                    work.migrate_left(p)
                h += 2
        elif minus:
            inner = [i for i in minus if h < i < n - 1]
            if inner:
                work.blowdown(inner[0])
            elif minus[0] == h:
                _move_block_left(work, h)
            else:
                _move_block_right(work, h)
        else:
            i = plus[0]
            work.lower(i, 1 if i < n - 1 else -1)


# -- entry points ------------------------------------------------------------


def _segment_kind(g: WeightedGraph) -> str:
    if not is_connected(g):
        raise GraphError("a segment must be connected")
    if any(not d.rational for d in g.vertices.values()):
        raise GraphError("a segment has only rational vertices")
    if any(g.degree(v) > 2 for v in g.vertices):
        raise GraphError("a segment has no vertex of degree above 2")
    if len(g.edges) == len(g):
        return "circular"
    return "linear"


def _chain_order(g: WeightedGraph) -> list[VertexId]:
    ends = sorted(v for v in g.vertices if g.degree(v) <= 1)
    start = ends[0]
    order = [start]
    prev, cur = None, start
    while len(order) < len(g):
        nxt = [u for u in g.neighbors(cur) if u != prev]
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def _orient_start(g: WeightedGraph, order: list[VertexId]) -> list[VertexId]:
    # start from the end whose weight sequence reads smaller, for stable output
    rev = order[::-1]
    return order if [g.weight(v) for v in order] <= [g.weight(v) for v in rev] else rev


def standard_form(g: WeightedGraph) -> StandardForm:
    """Reduce a standalone segment to a standard graph, recording every move."""
    kind = _segment_kind(g)
    if kind == "linear":
        order = _orient_start(g, _chain_order(g))
        if not is_standard_linear([g.weight(v) for v in order]) and is_standard_linear(
            [g.weight(v) for v in reversed(order)]
        ):
            order.reverse()
        work = _Work(g, order, cyclic=False)
        if not is_standard_linear(work.weights()):
            h = _reduce_chain(work)
            _orient_chain(work, h)
        ws = work.weights()
        z = 0
        while z < len(ws) and ws[z] == 0:
            z += 1
        if not is_standard_linear(ws):
            raise ReductionError(f"chain reducer stopped at non-standard {ws}")
        zeros, tail, order = z, tuple(ws[z:]), tuple(work.order)
    else:
        work = _Work(g, _cycle_order(g), cyclic=True)
        _reduce_cycle(work)
        reading = _cyclic_standard_reading(work.weights())
        if reading is None:
            raise ReductionError(f"cycle reducer stopped at non-standard {work.weights()}")
        zeros, tail = reading
        order = _standard_cyclic_order(work, zeros, tail)
    seq, trace = build_sequence(g, work.moves)
    return StandardForm(kind, zeros, tail, order, trace[-1], seq)


def _standard_cyclic_order(work: _Work, zeros: int, tail: tuple[int, ...]) -> tuple[VertexId, ...]:
    order = work.order
    target = [0] * zeros + list(tail)
    for r in range(len(order)):
        rot = order[r:] + order[:r]
        for seq in (rot, rot[::-1]):
            if [work.g.weight(v) for v in seq] == target:
                return tuple(seq)
    return tuple(order)


def reduce_extremal_segment(
    g: WeightedGraph, vertices: list[VertexId]
) -> tuple[BirationalSequence, list[WeightedGraph], VertexId]:
    """Chain-reduce an extremal linear segment inside ``g``.

    ``vertices`` is the segment in path order.  It is turned so a vertex of
    degree at most 1 comes first; the far end may hang on one branching vertex.
    Returns the sequence, its trace and the resulting (0)-vertex at the free end.
    """
    order = list(vertices)
    if g.degree(order[0]) > 1:
        order.reverse()
    if g.degree(order[0]) > 1:
        raise GraphError("segment has no free end")
    seg = set(order)
    outside = [u for u in g.neighbors(order[-1]) if u not in seg]
    if len(order) == 1:
        outside = [u for u in g.neighbors(order[0]) if u not in seg]
    anchor = outside[0] if outside else None
    work = _Work(g, order, cyclic=False, anchor=anchor)
    _reduce_chain(work)
    seq, trace = build_sequence(g, work.moves)
    tip = work.order[0]
    final = trace[-1]
    if final.weight(tip) != 0 or final.degree(tip) > 1:
        raise ReductionError("reduction did not produce a free (0)-tip")
    return seq, trace, tip
