import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_graph
from oracles import multigraph_realizable
from totalcolor.errors import PreconditionError
from totalcolor.graph import Graph
from totalcolor.tools import (
    Infeasible,
    balanced_partition,
    equitable_vertex_coloring,
    hakimi_realize,
    is_equitable,
    partition_bound,
    partition_violations,
)


@settings(max_examples=150)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=8))
def test_hakimi_against_exhaustive_pairing(raw):
    seq = sorted(raw, reverse=True)
    res = hakimi_realize(seq)
    assert bool(res) == multigraph_realizable(tuple(seq))
    if res:
        assert res.degrees() == seq
        assert all(h[0] != h[1] for h in res.edges())
    else:
        assert isinstance(res, Infeasible) and res.reason in ("odd-sum", "dominant-degree")


def test_hakimi_input_guards():
    with pytest.raises(PreconditionError):
        hakimi_realize([1, 2])
    with pytest.raises(PreconditionError):
        hakimi_realize([1, -1])
    assert hakimi_realize([]).m == 0


@pytest.mark.parametrize("seed", range(12))
def test_equitable_coloring_both_regimes(seed):
    rng = random.Random(seed)
    n = rng.randrange(6, 40)
    g = random_graph(rng, n, rng.uniform(0.1, 0.8))
    for k in (g.max_degree() + 1, g.max_degree() + 3, max(g.max_degree() + 1, (n + 1) // 2)):
        col = equitable_vertex_coloring(g, k)
        assert is_equitable(g, col, k)
        sizes = np.bincount(list(col.values()), minlength=k + 1)[1:]
        assert sizes.max() - sizes.min() <= 1


def test_equitable_palette_guard():
    with pytest.raises(PreconditionError):
        equitable_vertex_coloring(Graph.complete(4), 3)


def test_is_equitable_rejects_bad_colorings():
    g = Graph.path(4)
    assert not is_equitable(g, {0: 1, 1: 1, 2: 2, 3: 2}, 2)  # improper
    assert not is_equitable(g, {0: 1, 1: 2, 2: 1, 3: 4}, 3)  # color outside the palette
    assert is_equitable(g, {0: 1, 1: 2, 2: 1, 3: 2}, 2)


def test_is_equitable_spread():
    g = Graph(5)
    assert not is_equitable(g, {0: 1, 1: 1, 2: 1, 3: 2, 4: 3}, 3)
    assert is_equitable(g, {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}, 3)


@pytest.mark.parametrize("n", [10, 40, 120])
def test_balanced_partition_properties(n):
    rng = random.Random(n)
    g = random_graph(rng, n, 0.6)
    pairs = [(2 * i, 2 * i + 1) for i in range(n // 4)]
    part = balanced_partition(g, pairs, seed=1)
    assert partition_violations(g, part) == []
    assert all((x in part.A) != (y in part.A) for x, y in pairs)
    assert partition_bound(n) == pytest.approx((n / 2) ** (2 / 3))


def test_partition_violations_detects_imbalance():
    g = Graph.complete(8)
    from totalcolor.tools import Partition

    bad = Partition(frozenset({0, 1, 2}), frozenset(range(3, 8)), ((0, 1),))
    found = partition_violations(g, bad)
    assert "balance" in found and "pair(0,1)" in found


def test_balanced_partition_guards():
    with pytest.raises(PreconditionError):
        balanced_partition(Graph(5))
    with pytest.raises(PreconditionError):
        balanced_partition(Graph(6), [(0, 1), (1, 2)])
