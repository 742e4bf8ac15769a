"""Partial edge colorings with incremental missing-color bitsets, and Kempe chains."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterable

from ..graph import Edge, Multigraph, iter_bits, other_end


_observers: list[Callable] = []


@contextmanager
def observe_switches(fn: Callable):
    """Call ``fn(coloring, record)`` after every logged switch or shift, on any coloring."""
    _observers.append(fn)
    try:
        yield fn
    finally:
        _observers.remove(fn)


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class PartialEdgeColoring:
    """Proper partial edge coloring of a multigraph with palette ``1..k``.

    ``at[v]`` maps a color to the edge carrying it at ``v``; ``used[v]`` is the
    matching bitset (bit i set when color i appears at v).  Missing colors are
    ``full & ~used[v]``.  Every mutation keeps the three views consistent;
    :meth:`check` recomputes them from the raw assignment.

    An optional ``trace`` list receives one record per Kempe switch or shift.
    """

    __slots__ = ("graph", "k", "_color", "_at", "_used", "trace", "on_switch")

    def __init__(self, graph: Multigraph, k: int):
        if k < 0:
            raise ValueError("palette size must be non-negative")
        self.graph = graph
        self.k = k
        self._color: dict[Edge, int] = {}
        self._at: list[dict[int, Edge]] = [dict() for _ in range(graph.n)]
        self._used = [0] * graph.n
        self.trace = None
        self.on_switch = None

    @classmethod
    def from_assignment(cls, graph: Multigraph, k: int, assignment) -> "PartialEdgeColoring":
        c = cls(graph, k)
        for h in sorted(assignment):
            c.assign(h, assignment[h])
        return c

    def copy(self) -> "PartialEdgeColoring":
        c = PartialEdgeColoring(self.graph, self.k)
        c._color = dict(self._color)
        c._at = [dict(d) for d in self._at]
        c._used = list(self._used)
        return c

    @property
    def assignment(self) -> dict:
        return self._color

    @property
    def full_mask(self) -> int:
        return ((1 << (self.k + 1)) - 1) ^ 1

    def used_mask(self, v: int) -> int:
        return self._used[v]

    def missing_mask(self, v: int) -> int:
        return self.full_mask & ~self._used[v]

    def missing(self, v: int) -> set[int]:
        return set(iter_bits(self.missing_mask(v)))

    def color_of(self, h: Edge):
        return self._color.get(h)

    def edge_at(self, v: int, color: int):
        return self._at[v].get(color)

    def is_colored(self, h: Edge) -> bool:
        return h in self._color

    def assign(self, h: Edge, color: int) -> None:
        if not self.graph.has_handle(h):
            raise KeyError(f"{h} is not an edge of the host")
        if not 1 <= color <= self.k:
            raise ValueError(f"color {color} outside palette 1..{self.k}")
        old = self._color.get(h)
        if old == color:
            return
        u, v = h[0], h[1]
        for w in (u, v):
            holder = self._at[w].get(color)
            if holder is not None and holder != h:
                raise ValueError(f"color {color} already used at {w} by {holder}")
        if old is not None:
            self._drop(h, old)
        self._color[h] = color
        bit = 1 << color
        for w in (u, v):
            self._at[w][color] = h
            self._used[w] |= bit

    def _drop(self, h: Edge, color: int) -> None:
        bit = 1 << color
        for w in (h[0], h[1]):
            del self._at[w][color]
            self._used[w] &= ~bit

    def unassign(self, h: Edge) -> int:
        color = self._color.pop(h)
        self._drop(h, color)
        return color

    def colored_edges(self) -> list[Edge]:
        return sorted(self._color)

    def uncolored_edges(self) -> list[Edge]:
        return [h for h in self.graph.edges() if h not in self._color]

    def is_total(self) -> bool:
        return len(self._color) == self.graph.m

    def class_edges(self, color: int) -> list[Edge]:
        return sorted(h for h, c in self._color.items() if c == color)

    def class_sizes(self) -> list[int]:
        sizes = [0] * (self.k + 1)
        for c in self._color.values():
            sizes[c] += 1
        return sizes[1:]

    def colors_used(self) -> set[int]:
        return set(self._color.values())

    def missing_count(self, color: int, vertices: Iterable[int] | None = None) -> int:
        vs = range(self.graph.n) if vertices is None else vertices
        return sum(1 for v in vs if color not in self._at[v])

    def extend_palette(self, extra: int) -> None:
        self.k += extra

    def restrict_to(self, graph: Multigraph) -> "PartialEdgeColoring":
        """Coloring of a subgraph sharing handles with the host."""
        c = PartialEdgeColoring(graph, self.k)
        for h, col in self._color.items():
            if graph.has_handle(h):
                c.assign(h, col)
        return c

    def check(self) -> None:
        """Recompute the incidence views from the raw assignment and compare."""
        at = [dict() for _ in range(self.graph.n)]
        used = [0] * self.graph.n
        for h, col in self._color.items():
            if not self.graph.has_handle(h):
                raise AssertionError(f"colored edge {h} not in host")
            if not 1 <= col <= self.k:
                raise AssertionError(f"color {col} out of palette")
            for w in (h[0], h[1]):
                if col in at[w]:
                    raise AssertionError(f"improper at {w}: color {col}")
                at[w][col] = h
                used[w] |= 1 << col
        if at != self._at or used != self._used:
            raise AssertionError("incremental missing sets diverged from assignment")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "edges": [[u, v, s, c] for (u, v, s), c in sorted(self._color.items())],
            "uncolored": [list(h) for h in self.uncolored_edges()],
        }

    def _log(self, record: dict) -> None:
        if self.trace is not None:
            self.trace.append(record)
        if self.on_switch is not None:
            self.on_switch(self, record)
        for fn in _observers:
            fn(self, record)


@dataclass(frozen=True)
class KempePath:
    """Maximal (alpha, gamma)-alternating path or cycle; ``vertices`` has one more
    entry than ``edges`` for a path and equal ends for a cycle."""

    alpha: int
    gamma: int
    vertices: tuple
    edges: tuple
    cycle: bool = False

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]


def _walk(c: PartialEdgeColoring, v: int, first: int, second: int):
    verts, edges = [v], []
    cur, col = v, first
    while True:
        h = c.edge_at(cur, col)
        if h is None:
            return verts, edges, False
        nxt = other_end(h, cur)
        edges.append(h)
        verts.append(nxt)
        if nxt == v:
            return verts, edges, True
        cur = nxt
        col = second if col == first else first


def kempe_chain(c: PartialEdgeColoring, v: int, alpha: int, gamma: int) -> KempePath:
    """The maximal (alpha, gamma) chain through v (possibly a single vertex)."""
    if alpha == gamma:
        raise ValueError("kempe chain needs two distinct colors")
    fwd_v, fwd_e, cyc = _walk(c, v, alpha, gamma)
    if cyc:
        return KempePath(alpha, gamma, tuple(fwd_v), tuple(fwd_e), True)
    back_v, back_e, _ = _walk(c, v, gamma, alpha)
    verts = back_v[::-1] + fwd_v[1:]
    edges = back_e[::-1] + fwd_e
    return KempePath(alpha, gamma, tuple(verts), tuple(edges), False)


def chain_through_edge(c: PartialEdgeColoring, h: Edge, other: int) -> KempePath:
    col = c.color_of(h)
    return kempe_chain(c, h[0], col, other)


def _is_maximal(c: PartialEdgeColoring, p: KempePath) -> bool:
    cols = (p.alpha, p.gamma)
    for i, h in enumerate(p.edges):
        if c.color_of(h) != cols[0] and c.color_of(h) != cols[1]:
            return False
        if i and c.color_of(h) == c.color_of(p.edges[i - 1]):
            return False
        a, b = p.vertices[i], p.vertices[i + 1]
        if {a, b} != {h[0], h[1]}:
            return False
    if p.cycle:
        return bool(p.edges) and p.vertices[0] == p.vertices[-1] and len(p.edges) % 2 == 0
    if len(set(p.vertices)) != len(p.vertices):
        return False
    for end in (p.vertices[0], p.vertices[-1]):
        present = [col for col in cols if c.edge_at(end, col) is not None]
        inpath = [col for col in cols if c.edge_at(end, col) in p.edges]
        if present != inpath:
            return False
    return True


def kempe_switch(c: PartialEdgeColoring, p: KempePath) -> PartialEdgeColoring:
    """Swap the two colors along a maximal chain, in place."""
    if not _is_maximal(c, p):
        raise ValueError("kempe path is not a maximal alternating chain of this coloring")
    if not p.edges:
        return c
    old = [c.unassign(h) for h in p.edges]
    for h, col in zip(p.edges, old):
        c.assign(h, p.gamma if col == p.alpha else p.alpha)
    c._log({"op": "kempe", "colors": [p.alpha, p.gamma], "vertices": list(p.vertices)})
    return c
