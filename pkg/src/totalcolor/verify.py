"""Independent validators and brute-force oracles.

Validators read only raw color assignments and rebuild every incidence
structure themselves; they never consult a producer's bookkeeping (missing
sets, class indexes and so on).
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .graph import Graph, Multigraph


@dataclass(frozen=True)
class Violation:
    clause: str
    elements: tuple = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {"clause": self.clause, "elements": _jsonable(self.elements), "detail": self.detail}


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return x


@dataclass(frozen=True)
class Verdict:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def clauses(self) -> set[str]:
        return {v.clause for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


@dataclass
class TotalColoring:
    """Colors for every vertex and every edge ``(u, v)`` with ``u < v``."""

    vertex_color: dict = field(default_factory=dict)
    edge_color: dict = field(default_factory=dict)
    k: int = 0

    def colors_used(self) -> int:
        return len(set(self.vertex_color.values()) | set(self.edge_color.values()))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "vertices": [[v, c] for v, c in sorted(self.vertex_color.items())],
            "edges": [[u, v, 0, c] for (u, v), c in sorted(self.edge_color.items())],
            "uncolored": [],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TotalColoring":
        try:
            vc = {int(v): int(c) for v, c in obj["vertices"]}
            ec = {}
            for row in obj["edges"]:
                u, v, c = int(row[0]), int(row[1]), int(row[-1])
                ec[(min(u, v), max(u, v))] = c
            return cls(vc, ec, int(obj["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed total-coloring payload: {exc}") from None


def validate_total(g: Graph, tc: TotalColoring) -> Verdict:
    """Check that ``tc`` is a total coloring of ``g``; returns the first violation found.

    Coverage problems (missing or foreign elements) are reported under the
    ``coverage`` clause before any properness clause is examined.
    """
    edges = set(g.edges())
    missing_v = [v for v in range(g.n) if v not in tc.vertex_color]
    if missing_v:
        return Verdict((Violation("coverage", (("vertex", missing_v[0]),), f"{len(missing_v)} vertices uncolored"),))
    extra_v = sorted(v for v in tc.vertex_color if not (isinstance(v, int) and 0 <= v < g.n))
    if extra_v:
        return Verdict((Violation("coverage", (("vertex", extra_v[0]),), "color for a non-vertex"),))
    missing_e = sorted(edges - set(tc.edge_color))
    if missing_e:
        return Verdict((Violation("coverage", (("edge", missing_e[0]),), f"{len(missing_e)} edges uncolored"),))
    extra_e = sorted(set(tc.edge_color) - edges)
    if extra_e:
        return Verdict((Violation("coverage", (("edge", extra_e[0]),), "color for a non-edge"),))
    if tc.k:
        bad = sorted(x for x in list(tc.vertex_color.values()) + list(tc.edge_color.values()) if not 1 <= x <= tc.k)
        if bad:
            return Verdict((Violation("palette", (bad[0],), f"color outside 1..{tc.k}"),))
    for u, v in sorted(edges):
        if tc.vertex_color[u] == tc.vertex_color[v]:
            return Verdict((Violation("vertex-vertex", (u, v), f"both colored {tc.vertex_color[u]}"),))
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for e in sorted(edges):
        c = tc.edge_color[e]
        for w in e:
            if (w, c) in seen:
                return Verdict((Violation("edge-edge", (seen[(w, c)], e), f"both colored {c} at vertex {w}"),))
            seen[(w, c)] = e
    for e in sorted(edges):
        for w in e:
            if tc.vertex_color[w] == tc.edge_color[e]:
                return Verdict((Violation("vertex-edge", (w, e), f"both colored {tc.edge_color[e]}"),))
    return Verdict()


def _assignment(c) -> Mapping:
    return c if isinstance(c, Mapping) else c.assignment


def validate_good(ag, c) -> Verdict:
    """Check the good-coloring clauses for an edge coloring of G^M.

    Clauses, each reported separately: ``structure`` (M is a complement
    matching and E(x) is exactly x joined to the M-unsaturated vertices),
    ``coverage``, ``proper``, ``palette`` (at most Δ(G)+2 distinct colors) and
    ``rainbow`` (edges of M ∪ E(x) pairwise distinct).
    """
    g: Graph = ag.base
    x = ag.x
    viol = []
    M = [tuple(sorted(e[:2])) for e in ag.M]
    covered = [w for e in M for w in e]
    if len(set(covered)) != len(covered) or any(g.has_edge(u, v) for u, v in M) or any(u == v for u, v in M):
        viol.append(Violation("structure", tuple(M), "M is not a matching of the complement"))
    ex = sorted(tuple(sorted(e[:2])) for e in ag.Ex)
    expect_ex = sorted((w, x) if w < x else (x, w) for w in range(g.n) if w not in set(covered))
    if ex != expect_ex:
        viol.append(Violation("structure", tuple(ex), "E(x) is not x joined to the M-unsaturated vertices"))
    target = set(g.edges()) | set(M) | set(ex)
    asg = {tuple(sorted(h[:2])): col for h, col in _assignment(c).items()}
    if len(asg) != len(_assignment(c)):
        viol.append(Violation("proper", (), "parallel edge handles in a simple host"))
    missing = sorted(target - set(asg))
    extra = sorted(set(asg) - target)
    if missing or extra:
        viol.append(Violation("coverage", tuple(missing[:1] + extra[:1]),
                              f"{len(missing)} uncolored edges, {len(extra)} foreign edges"))
    seen = {}
    for e in sorted(asg):
        col = asg[e]
        hit = None
        for w in e:
            if (w, col) in seen:
                hit = (seen[(w, col)], e)
                break
        if hit:
            viol.append(Violation("proper", hit, f"color {col} repeats"))
            break
        for w in e:
            seen[(w, col)] = e
    used = set(asg.values())
    limit = g.max_degree() + 2
    if len(used) > limit:
        viol.append(Violation("palette", (len(used), limit), f"{len(used)} colors used, at most {limit} allowed"))
    special = sorted(set(M) | set(ex))
    owner = {}
    for e in special:
        if e not in asg:
            continue
        col = asg[e]
        if col in owner:
            viol.append(Violation("rainbow", (owner[col], e), f"both colored {col}"))
            break
        owner[col] = e
    return Verdict(tuple(viol))


def validate_edge_coloring(g, c, k: int | None = None, total: bool = True) -> Verdict:
    """Properness (and optionally totality) of an edge coloring on a Graph or Multigraph."""
    asg = dict(_assignment(c))
    hosts = g.edges() if isinstance(g, Multigraph) else [(u, v, 0) for u, v in g.edges()]
    host = set(hosts)
    foreign = sorted(set(asg) - host)
    if foreign:
        return Verdict((Violation("coverage", (foreign[0],), "color on a non-edge"),))
    if total:
        unc = sorted(host - set(asg))
        if unc:
            return Verdict((Violation("coverage", (unc[0],), f"{len(unc)} edges uncolored"),))
    if k is not None:
        bad = sorted(h for h, col in asg.items() if not 1 <= col <= k)
        if bad:
            return Verdict((Violation("palette", (bad[0],), f"color {asg[bad[0]]} outside 1..{k}"),))
    seen = {}
    for h in sorted(asg):
        col = asg[h]
        for w in h[:2]:
            if (w, col) in seen:
                return Verdict((Violation("proper", (seen[(w, col)], h), f"color {col} repeats at {w}"),))
        for w in h[:2]:
            seen[(w, col)] = h
    return Verdict()


def rainbow_verdict(c, F: Iterable) -> Verdict:
    asg = _assignment(c)
    owner = {}
    for e in sorted(F):
        if e not in asg:
            return Verdict((Violation("coverage", (e,), "rainbow edge uncolored"),))
        col = asg[e]
        if col in owner:
            return Verdict((Violation("rainbow", (owner[col], e), f"both colored {col}"),))
        owner[col] = e
    return Verdict()


def parity_check(g, c, k: int, vertices: Iterable[int] | None = None, colors: Iterable[int] | None = None) -> Verdict:
    """For each color i in 1..k, the number of vertices missing i has the parity of |V|.

    ``colors`` restricts the check to a subset of the palette.
    """
    asg = _assignment(c)
    vs = list(range(g.n)) if vertices is None else list(vertices)
    cols = list(range(1, k + 1)) if colors is None else sorted(colors)
    present: dict[int, set] = {i: set() for i in cols}
    for h, col in asg.items():
        s = present.get(col)
        if s is not None:
            s.add(h[0])
            s.add(h[1])
    viol = []
    for i in cols:
        miss = sum(1 for v in vs if v not in present.get(i, ()))
        if (miss - len(vs)) % 2:
            viol.append(Violation("parity", (i, miss), f"{miss} vertices miss color {i}, |V|={len(vs)}"))
    return Verdict(tuple(viol))


def _order_elements(adj: list[int]) -> list[int]:
    """Greedy order: highest conflict degree first, then most conflicts with placed elements."""
    N = len(adj)
    deg = [a.bit_count() for a in adj]
    placed = 0
    order = []
    remaining = set(range(N))
    while remaining:
        best = max(remaining, key=lambda i: ((adj[i] & placed).bit_count(), deg[i], -i))
        order.append(best)
        remaining.remove(best)
        placed |= 1 << best
    return order


def _exact_chromatic(adj: list[int], start: int = 1) -> tuple[int, list[int]]:
    N = len(adj)
    if N == 0:
        return 0, []
    if N > _kernels.MAX_ELEMENTS:
        raise PreconditionError("size-guard", f"{N} conflict elements exceed {_kernels.MAX_ELEMENTS}")
    order = _order_elements(adj)
    pos = {e: i for i, e in enumerate(order)}
    arr = np.zeros(N, np.int64)
    for i, e in enumerate(order):
        m = 0
        a = adj[e]
        while a:
            low = a & -a
            m |= 1 << pos[low.bit_length() - 1]
            a ^= low
        arr[i] = m
    k = max(1, start)
    while True:
        found, col = _kernels.colorable(arr, k)
        if found:
            colors = [0] * N
            for i, e in enumerate(order):
                colors[e] = int(col[i]) + 1
            return k, colors
        k += 1


def total_conflict_graph(g: Graph) -> tuple[list[int], list]:
    edges = g.edges()
    n = g.n
    elems = [("v", v) for v in range(n)] + [("e", e) for e in edges]
    adj = [0] * len(elems)

    def link(a, b):
        adj[a] |= 1 << b
        adj[b] |= 1 << a

    for i, (u, v) in enumerate(edges):
        link(u, v)
        link(n + i, u)
        link(n + i, v)
    for i, e in enumerate(edges):
        for j in range(i + 1, len(edges)):
            f = edges[j]
            if e[0] in f or e[1] in f:
                link(n + i, n + j)
    return adj, elems


def brute_total_chromatic(g: Graph, max_n: int = 8, witness: bool = False):
    """Exact total chromatic number by backtracking over vertices and edges together."""
    if g.n > max_n:
        raise PreconditionError("size-guard", f"n={g.n} exceeds max_n={max_n}")
    adj, elems = total_conflict_graph(g)
    chi, colors = _exact_chromatic(adj)
    if not witness:
        return chi
    tc = TotalColoring(k=chi)
    for (kind, obj), col in zip(elems, colors):
        if kind == "v":
            tc.vertex_color[obj] = col
        else:
            tc.edge_color[obj] = col
    return chi, tc


def brute_chromatic_index(g, max_edges: int = 40) -> int:
    """Exact chromatic index of a Graph or Multigraph (parallel edges conflict)."""
    hs = g.edges() if isinstance(g, Multigraph) else [(u, v, 0) for u, v in g.edges()]
    if len(hs) > max_edges:
        raise PreconditionError("size-guard", f"{len(hs)} edges exceed max_edges={max_edges}")
    adj = [0] * len(hs)
    for i, e in enumerate(hs):
        for j in range(i + 1, len(hs)):
            f = hs[j]
            if e[0] in f[:2] or e[1] in f[:2]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return _exact_chromatic(adj)[0]


def brute_max_matching(g, max_n: int = 10) -> int:
    """Maximum matching size by exhaustive branching on the lowest free vertex."""
    if g.n > max_n:
        raise PreconditionError("size-guard", f"n={g.n} exceeds max_n={max_n}")
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]

    def best(free: frozenset) -> int:
        if not free:
            return 0
        v = min(free)
        rest = free - {v}
        out = best(rest)
        for u in nbrs[v] & rest:
            out = max(out, 1 + best(rest - {u}))
        return out

    return best(frozenset(range(g.n)))


def brute_hall_free(g: Graph, X, Y) -> bool:
    """True when every subset S of X has |N(S) ∩ Y| ≥ |S| (small X only)."""
    X = sorted(X)
    Yset = set(Y)
    for mask in range(1, 1 << len(X)):
        S = [X[i] for i in range(len(X)) if (mask >> i) & 1]
        N = set()
        for s in S:
            N.update(w for w in g.neighbors(s) if w in Yset)
        if len(N) < len(S):
            return False
    return True
