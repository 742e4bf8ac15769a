"""Seeded random instances for sweeps and benchmarks."""

from __future__ import annotations

import math
import random

from .graph import Graph


def degree_window(n: int, min_frac: float = 0.55, max_frac: float = 0.75) -> tuple[int, int]:
    """Smallest allowed minimum degree and largest allowed maximum degree.

    The upper end is strict: Δ < max_frac·n.
    """
    lo = math.ceil(min_frac * n)
    hi = math.ceil(max_frac * n) - 1
    return lo, hi


def random_dense_graph(n: int, density: float = 0.65, *, seed: int = 0, min_frac: float = 0.55,
                       max_frac: float = 0.75) -> Graph:
    """G(n, density) pushed into the window min_frac·n ≤ δ, Δ < max_frac·n.

    Sampling is followed by a deterministic repair: vertices above the window
    drop an edge to their highest-degree neighbour, vertices below it gain an
    edge to their lowest-degree non-neighbour.
    """
    lo, hi = degree_window(n, min_frac, max_frac)
    if lo > hi or hi >= n:
        raise ValueError(f"empty degree window [{lo}, {hi}] for n={n}")
    rng = random.Random(seed)
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                adj[u].add(v)
                adj[v].add(u)
    for _ in range(20 * n * n):
        high = [v for v in range(n) if len(adj[v]) > hi]
        low = [v for v in range(n) if len(adj[v]) < lo]
        if not high and not low:
            break
        if high:
            v = min(high, key=lambda w: (-len(adj[w]), w))
            w = min(adj[v], key=lambda y: (-len(adj[y]), y))
            adj[v].discard(w)
            adj[w].discard(v)
        else:
            v = min(low, key=lambda w: (len(adj[w]), w))
            cand = [y for y in range(n) if y != v and y not in adj[v]]
            w = min(cand, key=lambda y: (len(adj[y]), y))
            adj[v].add(w)
            adj[w].add(v)
    else:
        raise RuntimeError("degree repair did not converge")
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def random_regular_like(n: int, d: int, *, seed: int = 0) -> Graph:
    """A d-regular graph on n vertices (configuration-free: circulant plus a seeded relabelling)."""
    if d >= n or (n * d) % 2:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    offsets = list(range(1, d // 2 + 1))
    edges = {(min(v, (v + o) % n), max(v, (v + o) % n)) for v in range(n) for o in offsets}
    if d % 2:
        edges |= {(v, v + n // 2) for v in range(n // 2)}
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    return Graph(n, [(perm[u], perm[v]) for u, v in edges])
