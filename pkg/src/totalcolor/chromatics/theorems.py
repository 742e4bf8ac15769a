"""Constructive edge-coloring theorems built on the partial-coloring kernel."""

from __future__ import annotations

from typing import Iterable, Mapping

from ..errors import PreconditionError
from ..graph import Edge, Graph, Multigraph, other_end
from .fans import ExtensionStats, extend_coloring
from .partial import PartialEdgeColoring, kempe_chain, kempe_switch, lowest_bit


def _as_multigraph(g) -> Multigraph:
    return g.to_multigraph() if isinstance(g, Graph) else g


def _misra_gries_edge(c: PartialEdgeColoring, e: Edge) -> None:
    u, v = e[0], e[1]
    g = c.graph
    fan = [v]
    fan_edge = [e]
    used = {v}
    while True:
        free_last = c.missing_mask(fan[-1])
        nxt = None
        for w in g.neighbors(u):
            if w in used:
                continue
            h = g.edges_between(u, w)[0]
            col = c.color_of(h)
            if col is not None and (free_last >> col) & 1:
                nxt = (w, h)
                break
        if nxt is None:
            break
        fan.append(nxt[0])
        fan_edge.append(nxt[1])
        used.add(nxt[0])
    cu = lowest_bit(c.missing_mask(u))
    d = lowest_bit(c.missing_mask(fan[-1]))
    if cu != d and not (c.missing_mask(u) >> d) & 1:
        kempe_switch(c, kempe_chain(c, u, cu, d))
    # the longest prefix of the fan that is still a fan, ending at a vertex missing d
    j_end = None
    for j in range(len(fan)):
        if j and not (c.missing_mask(fan[j - 1]) >> c.color_of(fan_edge[j])) & 1:
            break
        if (c.missing_mask(fan[j]) >> d) & 1:
            j_end = j
            break
    if j_end is None:
        raise AssertionError("Vizing fan rotation point not found")
    cols = [c.unassign(fan_edge[j]) for j in range(1, j_end + 1)]
    for j, col in enumerate(cols):
        c.assign(fan_edge[j], col)
    c.assign(fan_edge[j_end], d)


def vizing_color(g, k: int | None = None) -> PartialEdgeColoring:
    """Proper edge coloring with k ≥ Δ+1 colors (simple) or k ≥ Δ+μ (multigraph)."""
    mg = _as_multigraph(g)
    D, mu = mg.max_degree(), mg.mu()
    need = D + 1 if mu <= 1 else D + mu
    if k is None:
        k = need
    if k < need:
        raise PreconditionError("palette", f"k={k} below bound {need}")
    c = PartialEdgeColoring(mg, k)
    if mu <= 1:
        for e in mg.edges():
            _misra_gries_edge(c, e)
    else:
        extend_coloring(c)
    if not c.is_total():
        raise AssertionError("vizing_color left edges uncolored")
    return c


def is_bipartite(g, vertices: Iterable[int] | None = None):
    """Two-coloring of the vertices as a dict, or None when an odd cycle exists."""
    side: dict[int, int] = {}
    for s in (range(g.n) if vertices is None else vertices):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in side:
                    side[w] = 1 - side[v]
                    stack.append(w)
                elif side[w] == side[v]:
                    return None
    return side


def konig_color(g) -> PartialEdgeColoring:
    """Δ-edge-coloring of a bipartite multigraph by alternating-path switches."""
    mg = _as_multigraph(g)
    if is_bipartite(mg) is None:
        raise PreconditionError("bipartite", "graph has an odd cycle")
    c = PartialEdgeColoring(mg, mg.max_degree())
    for e in mg.edges():
        u, v = e[0], e[1]
        a = lowest_bit(c.missing_mask(u))
        if not (c.missing_mask(v) >> a) & 1:
            b = lowest_bit(c.missing_mask(v))
            p = kempe_chain(c, v, a, b)
            if u in p.vertices:
                raise AssertionError("alternating path closed an odd cycle")
            kempe_switch(c, p)
        c.assign(e, a)
    return c


def _excess_chain(c: PartialEdgeColoring, i: int, j: int, F: frozenset = frozenset()):
    """A maximal (i, j) path with one more i-edge than j-edges whose switch keeps F rainbow."""
    seen = set()
    f_hit = [h for h in F if c.color_of(h) in (i, j)]
    for e in c.class_edges(i):
        if e in seen:
            continue
        p = kempe_chain(c, e[0], i, j)
        seen.update(p.edges)
        if p.cycle:
            continue
        ni = sum(1 for h in p.edges if c.color_of(h) == i)
        if ni * 2 != len(p.edges) + 1:
            continue
        if f_hit:
            pe = set(p.edges)
            on = sum(1 for h in f_hit if h in pe)
            if 0 < on < len(f_hit):
                continue
        return p
    return None


def _set_palette(c: PartialEdgeColoring, k: int) -> None:
    if not c.is_total():
        raise PreconditionError("total", "coloring must cover every edge")
    top = max(c.colors_used(), default=0)
    if top > k:
        raise PreconditionError("palette", f"coloring uses color {top} > k={k}")
    c.k = k


def equalize(c: PartialEdgeColoring, k: int) -> PartialEdgeColoring:
    """Balance class sizes to within one by switching excess alternating paths, in place."""
    _set_palette(c, k)
    if k == 0:
        return c
    while True:
        sizes = c.class_sizes()
        hi = max(range(k), key=lambda t: (sizes[t], -t))
        lo = min(range(k), key=lambda t: (sizes[t], t))
        if sizes[hi] - sizes[lo] <= 1:
            return c
        p = _excess_chain(c, hi + 1, lo + 1)
        if p is None:
            raise AssertionError("no excess alternating path between unbalanced classes")
        kempe_switch(c, p)


def equalize_with_rainbow(c: PartialEdgeColoring, k: int, F: Iterable[Edge] = ()) -> PartialEdgeColoring:
    """Balance class sizes while keeping the edges of F pairwise distinctly colored.

    Only switches that move F-edges of both colors together, or none, are used.
    Each switch lowers the sum of squared class sizes, and some admissible
    switch exists while two classes differ by three or more, so sizes end
    within two of each other.  In place.
    """
    F = frozenset(F)
    cols = [c.color_of(h) for h in F]
    if None in cols or len(set(cols)) != len(cols):
        raise PreconditionError("rainbow", "F is not rainbow in the input coloring")
    if k < c.graph.max_degree():
        raise PreconditionError("palette", f"k={k} < Δ={c.graph.max_degree()}")
    _set_palette(c, k)
    while True:
        sizes = c.class_sizes()
        order = sorted(range(k), key=lambda t: (-sizes[t], t))
        moved = False
        for a in order:
            for b in reversed(order):
                if sizes[a] - sizes[b] < 2:
                    break
                p = _excess_chain(c, a + 1, b + 1, F)
                if p is not None:
                    kempe_switch(c, p)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
    sizes = c.class_sizes()
    if sizes and max(sizes) - min(sizes) > 5:
        raise AssertionError(f"class sizes spread {max(sizes) - min(sizes)} > 5")
    return c


def _check_rainbow(coloring: Mapping, J0) -> None:
    seen = {}
    for h in sorted(J0):
        col = coloring[h]
        if col in seen:
            raise PreconditionError("J0-rainbow", f"{seen[col]} and {h} share color {col}")
        seen[col] = h


def _common_preconditions(g: Multigraph, J, J0, coloring_of_J: Mapping, k: int):
    J = frozenset(J)
    J0 = frozenset(J0)
    for h in J:
        if not g.has_handle(h):
            raise PreconditionError("J-edges", f"{h} is not an edge")
    if not J0 <= J:
        raise PreconditionError("J-contains-J0", "J0 must be a subset of J")
    if set(coloring_of_J) != set(J):
        raise PreconditionError("coloring-domain", "the precoloring must color exactly J")
    for h, col in coloring_of_J.items():
        if not 1 <= col <= k:
            raise PreconditionError("palette", f"{h} colored {col} outside 1..{k}")
    at = {}
    for h in sorted(coloring_of_J):
        col = coloring_of_J[h]
        for w in h[:2]:
            if (w, col) in at:
                raise PreconditionError("coloring-proper", f"{at[(w, col)]} and {h} share color {col} at {w}")
            at[(w, col)] = h
    _check_rainbow(coloring_of_J, J0)
    return J, J0


def _finish(g: Multigraph, k: int, coloring_of_J: Mapping, J, J0, center_of, cap, heuristic=False, seed=0):
    c = PartialEdgeColoring.from_assignment(g, k, coloring_of_J)
    stats = extend_coloring(c, J, J0, center_of=center_of, cap=cap, heuristic=heuristic, seed=seed)
    c.check()
    if not c.is_total():
        raise AssertionError("extension left edges uncolored")
    _check_rainbow(c.assignment, J0)
    return c, stats


def extend_rainbow_coloring_a(g: Multigraph, J, J0, coloring_of_J: Mapping, k: int, x: int | None = None,
                              *, cap: int | None = None, return_stats: bool = False):
    """Extend a precoloring of J to all of g with k ≥ Δ+4 colors keeping J0 rainbow.

    Preconditions (each raised by name): μ ≤ 2; J0 is a matching plus a star
    at x; every edge at x lies in J (so no fan is ever centered at x); each
    u ≠ x has at most one doubled neighbor; g − J is simple; the precoloring
    is proper, colors exactly J, and is rainbow on J0.
    """
    J, J0 = _common_preconditions(g, J, J0, coloring_of_J, k)
    if g.mu() > 2:
        raise PreconditionError("multiplicity", f"μ={g.mu()} > 2")
    if k < g.max_degree() + 4:
        raise PreconditionError("palette", f"k={k} < Δ+4={g.max_degree() + 4}")
    if x is None:
        heavy = sorted({w for h in J0 for w in h[:2] if sum(1 for f in J0 if w in f[:2]) >= 2})
        if len(heavy) > 1:
            raise PreconditionError("J0-structure", f"several star centers {heavy}")
        x = heavy[0] if heavy else None
    if x is not None:
        if any(h not in J for h in g.edges_at(x)):
            raise PreconditionError("J0-structure", f"some edge at x={x} is outside J")
    rest = [h for h in J0 if x is None or x not in h[:2]]
    ends = [w for h in rest for w in h[:2]]
    if len(set(ends)) != len(ends):
        raise PreconditionError("J0-structure", "J0 minus the star is not a matching")
    for u in range(g.n):
        if u == x:
            continue
        doubled = [w for w in g.neighbors(u) if g.multiplicity(u, w) == 2]
        if len(doubled) > 1:
            raise PreconditionError("double-edges", f"vertex {u} has doubled neighbors {doubled}")
    seen_pairs = set()
    for h in g.edges():
        if h in J:
            continue
        if h[:2] in seen_pairs:
            raise PreconditionError("G-J-simple", f"parallel edges {h[:2]} outside J")
        seen_pairs.add(h[:2])
    c, stats = _finish(g, k, coloring_of_J, J, J0, lambda e: e[0], cap)
    return (c, stats) if return_stats else c


def extend_rainbow_coloring_b(g: Multigraph, J, J0, coloring_of_J: Mapping, k: int, sides, x: int,
                              *, cap: int | None = None, return_stats: bool = False):
    """Extend a precoloring of J to all of g with k ≥ Δ colors keeping J0 rainbow.

    g − x must be simple and bipartite with the given sides, J − x a matching,
    and every X-vertex of degree below k.  Uncolored edges are fanned from
    their Y endpoint.
    """
    J, J0 = _common_preconditions(g, J, J0, coloring_of_J, k)
    X, Y = frozenset(sides[0]), frozenset(sides[1])
    if X & Y or x in X or x in Y or (X | Y | {x}) != set(range(g.n)):
        raise PreconditionError("sides", "X, Y and {x} must partition the vertices")
    pairs = set()
    for h in g.edges():
        if x in h[:2]:
            continue
        if (h[0] in X) == (h[1] in X):
            raise PreconditionError("bipartite", f"edge {h[:2]} inside one side")
        if h[:2] in pairs:
            raise PreconditionError("simple", f"parallel edges {h[:2]} away from x")
        pairs.add(h[:2])
    jx = [w for h in J if x not in h[:2] for w in h[:2]]
    if len(set(jx)) != len(jx):
        raise PreconditionError("J-matching", "Δ(g[J] − x) > 1")
    if any(h not in J0 for h in g.edges_at(x)):
        raise PreconditionError("J0-structure", "some edge at x is outside J0")
    for v in sorted(X):
        if g.degree(v) >= k:
            raise PreconditionError("X-degree", f"vertex {v} has degree {g.degree(v)} ≥ k={k}")
    if k < g.max_degree():
        raise PreconditionError("palette", f"k={k} < Δ={g.max_degree()}")
    c, stats = _finish(g, k, coloring_of_J, J, J0, lambda e: e[0] if e[0] in Y else e[1], cap)
    return (c, stats) if return_stats else c


__all__ = [
    "ExtensionStats",
    "equalize",
    "equalize_with_rainbow",
    "extend_rainbow_coloring_a",
    "extend_rainbow_coloring_b",
    "is_bipartite",
    "konig_color",
    "vizing_color",
    "other_end",
]
