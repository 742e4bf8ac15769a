"""Hot loops: exact graph-coloring backtracking and partition imbalance repair.

Each kernel exists twice: a numba-compiled version and a plain Python/numpy
version.  Setting ``TOTALCOLOR_NO_NUMBA=1`` in the environment (or running
without numba installed) routes the public entry points to the plain versions.
Both are always importable as ``*_py`` / ``*_jit`` so the benchmark can compare them.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("TOTALCOLOR_NO_NUMBA", "").lower() not in ("1", "true", "yes")

MAX_ELEMENTS = 62  # conflict rows are int64 bitmasks


def colorable_py(adj, k):
    """Backtracking k-coloring of a conflict graph given as int64 neighbor masks.

    Vertices are colored in index order (callers pre-sort them).  Position d may
    only use colors up to one more than the largest color used before it, which
    removes palette symmetry.  Forward checking keeps, for every uncolored
    position, how many colors are already blocked by colored neighbors.

    Returns ``(found, colors)`` with colors in ``0..k-1``.
    """
    N = adj.shape[0]
    col = np.full(N, -1, np.int64)
    if N == 0:
        return True, col
    if k <= 0:
        return False, col
    forb = np.zeros((N, k), np.int64)
    nforb = np.zeros(N, np.int64)
    maxc = np.full(N + 1, -1, np.int64)
    d = 0
    while d >= 0:
        if d == N:
            return True, col
        c = col[d]
        if c >= 0:
            m = adj[d] >> (d + 1)
            j = d + 1
            while m:
                if m & 1:
                    forb[j, c] -= 1
                    if forb[j, c] == 0:
                        nforb[j] -= 1
                m >>= 1
                j += 1
        lim = maxc[d] + 2
        if lim > k:
            lim = k
        c += 1
        placed = False
        while c < lim:
            if forb[d, c] == 0:
                ok = True
                m = adj[d] >> (d + 1)
                j = d + 1
                while m:
                    if m & 1:
                        forb[j, c] += 1
                        if forb[j, c] == 1:
                            nforb[j] += 1
                            if nforb[j] == k:
                                ok = False
                    m >>= 1
                    j += 1
                if ok:
                    placed = True
                    break
                m = adj[d] >> (d + 1)
                j = d + 1
                while m:
                    if m & 1:
                        forb[j, c] -= 1
                        if forb[j, c] == 0:
                            nforb[j] -= 1
                    m >>= 1
                    j += 1
            c += 1
        if placed:
            col[d] = c
            maxc[d + 1] = maxc[d] if maxc[d] > c else c
            d += 1
        else:
            col[d] = -1
            d -= 1
    return False, col


def repair_partition_py(D, sigma, bound, max_steps):
    """Greedy sign flips lowering Σ_v max(0, |imbalance_v| − bound).

    ``D[v, p]`` is the change of d_A(v) − d_B(v) contributed by pair p when its
    sign is +1.  Vectorized numpy version.  Returns the final cost.
    """
    imb = D @ sigma
    cost = np.maximum(np.abs(imb) - bound, 0.0).sum()
    for _ in range(max_steps):
        if cost <= 0.0:
            break
        new = imb[:, None] - 2 * D * sigma[None, :]
        costs = np.maximum(np.abs(new) - bound, 0.0).sum(axis=0)
        p = int(np.argmin(costs))
        if costs[p] >= cost:
            break
        sigma[p] = -sigma[p]
        imb = new[:, p].copy()
        cost = costs[p]
    return cost


def _repair_partition_loops(D, sigma, bound, max_steps):
    V, P = D.shape
    imb = np.zeros(V, np.float64)
    for v in range(V):
        s = 0.0
        for p in range(P):
            s += D[v, p] * sigma[p]
        imb[v] = s
    cost = 0.0
    for v in range(V):
        a = abs(imb[v]) - bound
        if a > 0:
            cost += a
    for _ in range(max_steps):
        if cost <= 0.0:
            break
        best = cost
        bestp = -1
        for p in range(P):
            c = 0.0
            for v in range(V):
                a = abs(imb[v] - 2 * D[v, p] * sigma[p]) - bound
                if a > 0:
                    c += a
            if c < best:
                best = c
                bestp = p
        if bestp < 0:
            break
        for v in range(V):
            imb[v] -= 2 * D[v, bestp] * sigma[bestp]
        sigma[bestp] = -sigma[bestp]
        cost = best
    return cost


if HAS_NUMBA:
    colorable_jit = nb.njit(cache=True)(colorable_py)
    repair_partition_jit = nb.njit(cache=True)(_repair_partition_loops)
else:  # pragma: no cover
    colorable_jit = colorable_py
    repair_partition_jit = repair_partition_py

colorable = colorable_jit if USE_NUMBA else colorable_py
repair_partition = repair_partition_jit if USE_NUMBA else repair_partition_py


def backend() -> str:
    return "numba" if USE_NUMBA else "python"
