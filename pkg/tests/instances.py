"""Random instance generators shared by the test modules."""

from __future__ import annotations

import random

from totalcolor.graph import Graph, Multigraph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def rainbow_a_instance(rng: random.Random, n: int):
    """Multigraph with J0 = matching M ∪ full star at x, doubled edges only on M."""
    x = n - 1
    core = list(range(n - 1))
    p = rng.uniform(0.2, 0.8)
    g = Multigraph(n)
    for i in core:
        for j in core[i + 1:]:
            if rng.random() < p:
                g.add_edge(i, j)
    rng.shuffle(core)
    mcount = rng.randrange(0, (n - 1) // 2 + 1)
    M = [g.add_edge(core[2 * i], core[2 * i + 1]) for i in range(mcount)]
    rest = core[2 * mcount:]
    star = [g.add_edge(x, w) for w in rest if rng.random() < 0.7]
    J0 = M + star
    delta = g.max_degree()
    # keep |J0| ≤ Δ as the contract asks, by trimming the star
    while len(J0) > delta and star:
        h = star.pop()
        g.remove_edge(h)
        J0.remove(h)
        delta = g.max_degree()
    colors = list(range(1, len(J0) + 1))
    rng.shuffle(colors)
    coloring = dict(zip(J0, colors))
    k = max(g.max_degree() + 4, len(J0))
    return g, set(J0), set(J0), coloring, k, x


def rainbow_b_instance(rng: random.Random, n: int):
    """Bipartite simple graph plus apex x; J0 = a matching ∪ full star at x."""
    x = n - 1
    vs = list(range(n - 1))
    rng.shuffle(vs)
    cut = rng.randrange(1, n - 1)
    X, Y = sorted(vs[:cut]), sorted(vs[cut:])
    p = rng.uniform(0.2, 0.9)
    g = Multigraph(n)
    for a in X:
        for b in Y:
            if rng.random() < p:
                g.add_edge(a, b)
    free_x, free_y = list(X), list(Y)
    M = []
    for h in g.edges():
        if h[0] in free_x and h[1] in free_y or h[1] in free_x and h[0] in free_y:
            if rng.random() < 0.3:
                M.append(h)
                for w in h[:2]:
                    if w in free_x:
                        free_x.remove(w)
                    if w in free_y:
                        free_y.remove(w)
    star = [g.add_edge(x, w) for w in vs if rng.random() < 0.3]
    J0 = M + star
    colors = list(range(1, len(J0) + 1))
    rng.shuffle(colors)
    coloring = dict(zip(J0, colors))
    k = max(g.max_degree(), len(J0), max((g.degree(v) for v in X), default=0) + 1)
    return g, set(J0), set(J0), coloring, k, (X, Y), x
