import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import random_graph
from oracles import as_nx, matching_size_dp
from test_graph import graphs
from totalcolor.errors import ConstructionError, PreconditionError
from totalcolor.graph import Graph, complement
from totalcolor.matching import (
    bipartite_perfect_matching,
    complement_matching,
    dirac_hamilton_cycle,
    hall_violator,
    hopcroft_karp,
    is_hamilton_cycle,
    linking_paths,
    max_matching,
    validate_linking,
)
from totalcolor.verify import brute_hall_free, brute_max_matching


def _odd_components(g, removed):
    G = as_nx(g)
    G.remove_nodes_from(removed)
    return sum(len(c) % 2 for c in nx.connected_components(G))


@given(graphs(max_n=14))
def test_max_matching_is_a_maximum_matching(g):
    res = max_matching(g)
    ends = [w for e in res.pairs() for w in e]
    assert len(set(ends)) == len(ends)
    assert all(g.has_edge(u, v) for u, v in res.pairs())
    assert res.size == matching_size_dp(g.n, g.edges())
    # the witness certifies optimality through the Tutte-Berge formula
    S = res.witness
    assert 2 * res.size == g.n + len(S) - _odd_components(g, S)


def test_max_matching_agrees_with_networkx_on_larger_graphs():
    rng = random.Random(3)
    for _ in range(30):
        g = random_graph(rng, rng.randrange(20, 60), rng.uniform(0.02, 0.3))
        ref = len(nx.max_weight_matching(as_nx(g), maxcardinality=True))
        assert max_matching(g).size == ref


def test_brute_max_matching_guard():
    with pytest.raises(PreconditionError):
        brute_max_matching(Graph(11), max_n=10)
    assert brute_max_matching(Graph.complete(5)) == 2


def test_complement_matching_target_and_shortfall():
    g = Graph.cycle(6)
    cm = complement_matching(g, Fraction(1, 100), 3, check=False)
    assert not cm.shortfall and len(cm.edges) == 3
    assert all(not g.has_edge(u, v) for u, v in cm.edges)
    k5 = Graph.complete(5)
    cm = complement_matching(k5, Fraction(1, 100), 2, check=False)
    assert cm.shortfall and cm.edges == () and cm.maximum == 0


def test_complement_matching_checks_density():
    with pytest.raises(PreconditionError):
        complement_matching(Graph.cycle(8), Fraction(1, 100), 2, check=True)


@pytest.mark.parametrize("n", [5, 12, 31, 60])
def test_dirac_hamilton_cycle(n):
    rng = random.Random(n)
    for seed in range(5):
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.6]
        g = Graph(n, edges)
        # top up to the Dirac condition
        while 2 * g.min_degree() < n:
            v = min(range(n), key=g.degree)
            w = next(w for w in range(n) if w != v and not g.has_edge(v, w))
            g = g.with_edges_added([(v, w)])
        cyc = dirac_hamilton_cycle(g, seed=seed)
        assert is_hamilton_cycle(g, cyc)


def test_dirac_precondition():
    with pytest.raises(PreconditionError):
        dirac_hamilton_cycle(Graph.path(6))


def test_linking_paths_cover_and_join():
    rng = random.Random(11)
    for trial in range(10):
        n = rng.randrange(20, 40)
        g = random_graph(rng, n, 0.75)
        vs = rng.sample(range(n), 4)
        pairs = [(vs[0], vs[1]), (vs[2], vs[3])]
        lf = linking_paths(g, pairs, seed=trial, check=False)
        assert validate_linking(g, pairs, lf.paths)


def test_linking_small_exact_failure():
    # a path 0-1-2-3 cannot link 0 to 3 and 1 to 2 disjointly
    with pytest.raises(ConstructionError):
        linking_paths(Graph.path(4), [(0, 3), (1, 2)], check=False)


def test_linking_pair_guard():
    with pytest.raises(PreconditionError):
        linking_paths(Graph.complete(8), [(0, 1)], Fraction(1, 10), check=True)


@settings(max_examples=60)
@given(st.integers(1, 6), st.integers(0, 2 ** 20), st.floats(0.1, 0.9))
def test_bipartite_matching_vs_hall(k, seed, p):
    rng = random.Random(seed)
    X, Y = list(range(k)), list(range(k, 2 * k))
    g = Graph(2 * k, [(a, b) for a in X for b in Y if rng.random() < p])
    res = bipartite_perfect_matching(g, (X, Y))
    assert res.perfect == brute_hall_free(g, X, Y)
    if res.perfect:
        ends = [w for h in res.matching for w in h[:2]]
        assert sorted(ends) == list(range(2 * k))
    else:
        S = res.hall_violator
        N = {w for s in S for w in g.neighbors(s)}
        assert len(N) < len(S)


def test_hopcroft_karp_matches_networkx():
    rng = random.Random(8)
    for _ in range(20):
        a, b = rng.randrange(1, 15), rng.randrange(1, 15)
        nb = {u: [a + j for j in range(b) if rng.random() < 0.3] for u in range(a)}
        mate = hopcroft_karp(list(range(a)), lambda u: nb[u])
        B = nx.Graph()
        B.add_nodes_from(range(a + b))
        B.add_edges_from((u, w) for u in nb for w in nb[u])
        ref = nx.bipartite.maximum_matching(B, top_nodes=range(a))
        assert len(mate) == len(ref) // 2
        free = set(range(a)) - set(mate)
        if free:
            assert free <= hall_violator(list(range(a)), lambda u: nb[u], mate)


def test_bipartite_preconditions():
    g = Graph(4, [(0, 1)])
    with pytest.raises(PreconditionError):
        bipartite_perfect_matching(g, ([0, 1], [2, 3]))
    with pytest.raises(PreconditionError):
        bipartite_perfect_matching(g, ([0], [1, 2, 3]))
