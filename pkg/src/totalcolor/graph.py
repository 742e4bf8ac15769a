"""Simple graphs, multigraphs with stable edge handles, and degree bookkeeping.

Vertices are the integers ``0..n-1``.  ``Graph`` is immutable and keeps one
bitset row per vertex (a Python int), which makes dense adjacency tests and
complements cheap.  ``Multigraph`` is mutable; every parallel edge gets its own
handle ``(u, v, slot)`` with ``u < v`` so colorings can tell parallel edges apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

Edge = tuple  # (u, v, slot) with u < v


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "_rows", "labels", "_edges")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), labels=None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        rows = [0] * n
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self._rows = tuple(rows)
        self.labels = tuple(labels) if labels is not None else None
        self._edges = None

    @classmethod
    def from_rows(cls, rows: Sequence[int], labels=None) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(rows)
        g._rows = tuple(rows)
        g.labels = tuple(labels) if labels is not None else None
        g._edges = None
        for v, r in enumerate(g._rows):
            if (r >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
        for u, v in g.edges():
            if not (g._rows[v] >> u) & 1:
                raise ValueError("adjacency rows are not symmetric")
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls.from_rows([full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def rows(self) -> tuple:
        return self._rows

    def row(self, v: int) -> int:
        return self._rows[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._rows[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self._rows[v]))

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        if self._edges is None:
            out = []
            for u, r in enumerate(self._rows):
                for v in iter_bits(r >> (u + 1)):
                    out.append((u, u + 1 + v))
            self._edges = tuple(out)
        return list(self._edges)

    @property
    def m(self) -> int:
        return sum(self.degrees()) // 2

    def is_regular(self) -> bool:
        d = self.degrees()
        return len(set(d)) <= 1

    def with_edges_removed(self, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = list(self._rows)
        for e in edges:
            u, v = e[0], e[1]
            if not (rows[u] >> v) & 1:
                raise ValueError(f"edge {u}-{v} not present")
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph.from_rows(rows, self.labels)

    def with_edges_added(self, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = list(self._rows)
        for e in edges:
            u, v = e[0], e[1]
            if u == v or (rows[u] >> v) & 1:
                raise ValueError(f"cannot add edge {u}-{v}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph.from_rows(rows, self.labels)

    def induced_on(self, vertices: Iterable[int]) -> "Graph":
        """Same vertex set, keeping only edges with both ends in ``vertices``."""
        mask = 0
        for v in vertices:
            mask |= 1 << v
        rows = [(r & mask) if (mask >> v) & 1 else 0 for v, r in enumerate(self._rows)]
        return Graph.from_rows(rows, self.labels)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def to_multigraph(self) -> "Multigraph":
        return Multigraph(self.n, self.edges())

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph.from_rows([full & ~r & ~(1 << v) for v, r in enumerate(g.rows)], g.labels)


class Multigraph:
    """Mutable loopless multigraph with per-edge handles ``(u, v, slot)``.

    A new parallel edge takes the smallest free slot for its vertex pair, so
    handles are stable for the lifetime of the edge.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        self.n = n
        self._slots: dict[tuple[int, int], set[int]] = {}
        self._nbr: list[dict[int, int]] = [dict() for _ in range(n)]
        self._deg = [0] * n
        for e in edges:
            self.add_edge(e[0], e[1])

    @classmethod
    def from_handles(cls, n: int, handles: Iterable[Edge]) -> "Multigraph":
        mg = cls(n)
        for h in handles:
            mg.add_handle(h)
        return mg

    def copy(self) -> "Multigraph":
        mg = Multigraph(self.n)
        mg._slots = {k: set(s) for k, s in self._slots.items()}
        mg._nbr = [dict(d) for d in self._nbr]
        mg._deg = list(self._deg)
        return mg

    def add_edge(self, u: int, v: int) -> Edge:
        u, v = norm(int(u), int(v))
        slots = self._slots.get((u, v), set())
        s = 0
        while s in slots:
            s += 1
        return self.add_handle((u, v, s))

    def add_handle(self, h: Edge) -> Edge:
        u, v, s = h
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < v < self.n):
            raise ValueError(f"bad handle {h} for n={self.n}")
        slots = self._slots.setdefault((u, v), set())
        if s in slots:
            raise ValueError(f"handle {h} already present")
        slots.add(s)
        self._nbr[u][v] = self._nbr[u].get(v, 0) + 1
        self._nbr[v][u] = self._nbr[v].get(u, 0) + 1
        self._deg[u] += 1
        self._deg[v] += 1
        return (u, v, s)

    def remove_edge(self, h: Edge) -> None:
        u, v, s = h
        slots = self._slots.get((u, v))
        if not slots or s not in slots:
            raise KeyError(h)
        slots.remove(s)
        if not slots:
            del self._slots[(u, v)]
        for a, b in ((u, v), (v, u)):
            c = self._nbr[a][b] - 1
            if c:
                self._nbr[a][b] = c
            else:
                del self._nbr[a][b]
        self._deg[u] -= 1
        self._deg[v] -= 1

    def has_handle(self, h: Edge) -> bool:
        return h[2] in self._slots.get((h[0], h[1]), ())

    def multiplicity(self, u: int, v: int) -> int:
        return self._nbr[u].get(v, 0)

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._nbr[v])

    def degree(self, v: int) -> int:
        return self._deg[v]

    def degrees(self) -> list[int]:
        return list(self._deg)

    def max_degree(self) -> int:
        return max(self._deg, default=0)

    def min_degree(self) -> int:
        return min(self._deg, default=0)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self._slots.values())

    def mu(self) -> int:
        return max((len(s) for s in self._slots.values()), default=0)

    def mu_at(self, v: int) -> int:
        return max(self._nbr[v].values(), default=0)

    def is_simple(self) -> bool:
        return self.mu() <= 1

    def edges(self) -> list[Edge]:
        return sorted((u, v, s) for (u, v), slots in self._slots.items() for s in slots)

    def edges_at(self, v: int) -> list[Edge]:
        out = []
        for w in self._nbr[v]:
            a, b = norm(v, w)
            out.extend((a, b, s) for s in self._slots[(a, b)])
        out.sort()
        return out

    def edges_between(self, u: int, v: int) -> list[Edge]:
        a, b = norm(u, v)
        return sorted((a, b, s) for s in self._slots.get((a, b), ()))

    def to_graph(self) -> Graph:
        if not self.is_simple():
            raise ValueError("multigraph has parallel edges")
        return Graph(self.n, [(u, v) for u, v, _ in self.edges()])

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, m={self.m}, mu={self.mu()})"


def other_end(h: Edge, v: int) -> int:
    return h[1] if h[0] == v else h[0]


def handle(u: int, v: int, slot: int = 0) -> Edge:
    a, b = norm(u, v)
    return (a, b, slot)


@dataclass(frozen=True)
class DegreeProfile:
    delta: int
    Delta: int
    V_delta: frozenset
    V_Delta: frozenset
    U_xi: frozenset
    middle: frozenset

    @property
    def regular(self) -> bool:
        return self.delta == self.Delta


def degree_profile(g, xi, vertices: Iterable[int] | None = None) -> DegreeProfile:
    """Minimum/maximum degree sets, U_ξ = {u : Δ − d(u) ≥ ξn} and middle-degree vertices.

    ``vertices`` restricts attention to a subset (n is then its size); by default
    all vertices of ``g`` are used.
    """
    vs = list(range(g.n)) if vertices is None else sorted(vertices)
    if not vs:
        raise ValueError("degree profile of an empty graph")
    xi = as_fraction(xi)
    d = {v: g.degree(v) for v in vs}
    lo, hi = min(d.values()), max(d.values())
    n = len(vs)
    return DegreeProfile(
        delta=lo,
        Delta=hi,
        V_delta=frozenset(v for v in vs if d[v] == lo),
        V_Delta=frozenset(v for v in vs if d[v] == hi),
        U_xi=frozenset(v for v in vs if hi - d[v] >= xi * n),
        middle=frozenset(v for v in vs if lo < d[v] < hi),
    )
