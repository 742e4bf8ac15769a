"""Compiled vs plain kernels: exact total chromatic number and partition repair.

Run:  python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends are called directly (``*_jit`` / ``*_py``), so the
TOTALCOLOR_NO_NUMBA flag does not matter here.  The first compiled call is
timed separately as warm-up.
"""

import argparse
import time

import networkx as nx
import numpy as np

from totalcolor import _kernels
from totalcolor.graph import Graph
from totalcolor.verify import _order_elements, total_conflict_graph


def conflict_arrays(graphs):
    out = []
    for g in graphs:
        adj, _ = total_conflict_graph(g)
        order = _order_elements(adj)
        pos = {e: i for i, e in enumerate(order)}
        arr = np.zeros(len(adj), np.int64)
        for i, e in enumerate(order):
            m = 0
            for j in range(len(adj)):
                if adj[e] >> j & 1:
                    m |= 1 << pos[j]
            arr[i] = m
        out.append((arr, g.max_degree()))
    return out


def time_colorable(fn, cases):
    t = time.perf_counter()
    for arr, D in cases:
        # the two calls that decide χ_T ∈ {Δ+1, Δ+2}
        fn(arr, D + 1)
        fn(arr, D + 2)
    return time.perf_counter() - t


def time_repair(fn, cases):
    t = time.perf_counter()
    for D, sigma, bound in cases:
        fn(D, sigma.copy(), bound, 4 * D.shape[1] + 50)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--atlas-n", type=int, default=6, help="largest atlas order to color")
    args = ap.parse_args()

    graphs = [Graph(G.number_of_nodes(), list(G.edges())) for G in nx.graph_atlas_g()
              if 1 <= G.number_of_nodes() <= args.atlas_n]
    ccases = conflict_arrays(graphs)
    rng = np.random.default_rng(0)
    rcases = []
    for n in (60, 100, 200):
        A = (rng.random((n, n)) < 0.6).astype(np.float64)
        A = np.triu(A, 1)
        A = A + A.T
        D = np.ascontiguousarray(A[:, 0::2] - A[:, 1::2])
        # a third of the real bound, so the greedy loop runs for many steps
        rcases.append((D, rng.choice(np.array([-1.0, 1.0]), size=D.shape[1]), (n / 2) ** (2 / 3) / 3))

    t0 = time.perf_counter()
    _kernels.colorable_jit(ccases[0][0], 2)
    _kernels.repair_partition_jit(*rcases[0][:2], rcases[0][2], 10)
    warm = time.perf_counter() - t0

    rows = []
    for name, fn_py, fn_jit, timer, cases in (
        ("colorable", _kernels.colorable_py, _kernels.colorable_jit, time_colorable, ccases),
        ("repair_partition", _kernels.repair_partition_py, _kernels.repair_partition_jit, time_repair, rcases),
    ):
        py = min(timer(fn_py, cases) for _ in range(args.repeat))
        jit = min(timer(fn_jit, cases) for _ in range(args.repeat))
        rows.append((name, len(cases), py, jit))

    print(f"numba warm-up (compile or cache load): {warm:.2f}s")
    print(f"{'kernel':<18} {'cases':>6} {'python s':>10} {'numba s':>10} {'speedup':>8}")
    for name, k, py, jit in rows:
        print(f"{name:<18} {k:>6} {py:>10.4f} {jit:>10.4f} {py / jit:>7.1f}x")


if __name__ == "__main__":
    main()
