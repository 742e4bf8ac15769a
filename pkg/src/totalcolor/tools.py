"""Degree-sequence realization, equitable vertex coloring and balanced partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from . import _kernels
from .errors import ConstructionError, PreconditionError
from .graph import Graph, Multigraph
from .matching import _max_matching_adj, complement_adjacency


@dataclass(frozen=True)
class Infeasible:
    reason: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def hakimi_realize(degrees: Sequence[int]):
    """Loopless multigraph with the given degrees (vertex i gets degrees[i]).

    Feasible iff the sum is even and the largest degree is at most the sum of
    the others.  The construction repeatedly joins the two vertices of largest
    remaining degree, which preserves both conditions.
    """
    d = [int(x) for x in degrees]
    if any(x < 0 for x in d):
        raise PreconditionError("non-negative", "degrees must be non-negative")
    if any(d[i] < d[i + 1] for i in range(len(d) - 1)):
        raise PreconditionError("sorted", "degrees must be non-increasing")
    total = sum(d)
    if total % 2:
        return Infeasible("odd-sum", f"degree sum {total} is odd")
    if d and d[0] > total - d[0]:
        return Infeasible("dominant-degree", f"d1={d[0]} exceeds the sum of the rest {total - d[0]}")
    g = Multigraph(len(d))
    rem = list(d)
    while rem:
        order = sorted(range(len(rem)), key=lambda i: (-rem[i], i))
        a, b = order[0], order[1] if len(order) > 1 else None
        if rem[a] == 0:
            break
        g.add_edge(a, b)
        rem[a] -= 1
        rem[b] -= 1
    if g.degrees() != d:
        raise AssertionError("realization has the wrong degrees")
    return g


def is_equitable(g: Graph, coloring: dict, k: int) -> bool:
    if set(coloring) != set(range(g.n)):
        return False
    if any(not 1 <= c <= k for c in coloring.values()):
        return False
    if any(coloring[u] == coloring[v] for u, v in g.edges()):
        return False
    sizes = [0] * k
    for c in coloring.values():
        sizes[c - 1] += 1
    return max(sizes) - min(sizes) <= 1 if k else g.n == 0


def equitable_vertex_coloring(g: Graph, k: int) -> dict[int, int]:
    """Proper vertex coloring with colors 1..k whose class sizes differ by at most one.

    When 2k ≥ n every class has at most two vertices, so n − k independent
    pairs (a complement matching) plus singletons suffice.  Otherwise the
    Kierstead–Kostochka procedure from networkx is used.  Either way the
    result is validated.
    """
    n = g.n
    if k <= g.max_degree():
        raise PreconditionError("palette", f"k={k} ≤ Δ={g.max_degree()}")
    if n == 0:
        return {}
    if 2 * k >= n:
        pairs_needed = max(0, n - k)
        res = _max_matching_adj(n, complement_adjacency(g))
        pairs = res.pairs()
        if len(pairs) < pairs_needed:
            raise AssertionError("complement matching smaller than the equitable bound")
        coloring = {}
        for i, (u, v) in enumerate(pairs[:pairs_needed]):
            coloring[u] = coloring[v] = i + 1
        nxt = pairs_needed + 1
        for v in range(n):
            if v not in coloring:
                coloring[v] = nxt
                nxt += 1
    else:
        G = nx.Graph()
        G.add_nodes_from(range(n))
        G.add_edges_from(g.edges())
        raw = nx.equitable_color(G, k)
        coloring = {int(v): int(c) + 1 for v, c in raw.items()}
    if not is_equitable(g, coloring, k):
        raise AssertionError("equitable coloring failed validation")
    return coloring


@dataclass(frozen=True)
class Partition:
    A: frozenset
    B: frozenset
    pairs: tuple

    def side(self, v: int) -> str:
        return "A" if v in self.A else "B"


def partition_bound(n: int) -> float:
    return (n / 2) ** (2 / 3)


def partition_violations(g: Graph, part: Partition, pairs=None) -> list[str]:
    """Independent check of the three partition properties; empty when all hold."""
    out = []
    A, B = set(part.A), set(part.B)
    if A & B or (A | B) != set(range(g.n)):
        out.append("cover")
    if len(A) != len(B):
        out.append("balance")
    for x, y in (part.pairs if pairs is None else pairs):
        if (x in A) == (y in A):
            out.append(f"pair({x},{y})")
    bound = partition_bound(g.n)
    maskA = sum(1 << v for v in A)
    maskB = sum(1 << v for v in B)
    for v in range(g.n):
        gap = abs((g.row(v) & maskA).bit_count() - (g.row(v) & maskB).bit_count())
        if gap > bound:
            out.append(f"degree({v}):{gap}>{bound:.3f}")
    return out


def balanced_partition(g: Graph, pairs=(), *, seed: int = 0, restarts: int = 50) -> Partition:
    """Split V into equal halves, one vertex of every pair on each side, with
    |d_A(v) − d_B(v)| ≤ (n/2)^{2/3} for every vertex.

    Unpaired vertices are paired up in index order.  Each attempt starts from
    random signs and runs the greedy flip kernel on the violation excess.
    """
    n = g.n
    if n % 2:
        raise PreconditionError("even-order", f"n={n} is odd")
    pairs = [tuple(map(int, p)) for p in pairs]
    flat = [v for p in pairs for v in p]
    if len(set(flat)) != len(flat) or any(a == b for a, b in pairs):
        raise PreconditionError("pairs", "pairs must be disjoint")
    rest = [v for v in range(n) if v not in set(flat)]
    full = pairs + [(rest[2 * i], rest[2 * i + 1]) for i in range(len(rest) // 2)]
    P = len(full)
    adj = g.adjacency_matrix().astype(np.float64)
    xs = np.array([p[0] for p in full], dtype=np.int64)
    ys = np.array([p[1] for p in full], dtype=np.int64)
    D = adj[:, xs] - adj[:, ys] if P else np.zeros((n, 0))
    bound = partition_bound(n)
    rng = np.random.default_rng(seed)
    for attempt in range(restarts):
        sigma = rng.choice(np.array([-1.0, 1.0]), size=P)
        cost = _kernels.repair_partition(np.ascontiguousarray(D), sigma, bound, 4 * P + 50)
        if cost <= 0:
            A = frozenset(int(x if s > 0 else y) for (x, y), s in zip(full, sigma))
            B = frozenset(range(n)) - A
            part = Partition(A, B, tuple(pairs))
            if not partition_violations(g, part):
                return part
    raise ConstructionError("balanced-partition", f"no valid split after {restarts} restarts")
