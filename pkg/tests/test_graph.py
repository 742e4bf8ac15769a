import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from totalcolor.graph import Graph, Multigraph, complement, degree_profile, handle, iter_bits, other_end


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_basic_counts():
    g = Graph.complete(5)
    assert g.m == 10
    assert g.degrees() == [4] * 5
    assert g.is_regular()
    c = Graph.cycle(6)
    assert c.m == 6 and c.max_degree() == c.min_degree() == 2
    p = Graph.path(4)
    assert p.edges() == [(0, 1), (1, 2), (2, 3)]


def test_rejects_loops_and_out_of_range():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


@given(graphs())
def test_handshake_and_complement(g):
    assert sum(g.degrees()) == 2 * g.m
    h = complement(g)
    assert g.m + h.m == g.n * (g.n - 1) // 2
    assert not set(g.edges()) & set(h.edges())


@given(graphs())
def test_remove_then_add_restores(g):
    es = g.edges()[::2]
    assert g.with_edges_removed(es).with_edges_added(es) == g


@given(graphs())
def test_adjacency_matrix_symmetric(g):
    a = g.adjacency_matrix()
    assert (a == a.T).all()
    assert int(a.sum()) == 2 * g.m


def test_iter_bits():
    assert list(iter_bits(0b101001)) == [0, 3, 5]


def test_multigraph_handles():
    mg = Multigraph(3)
    h1 = mg.add_edge(0, 1)
    h2 = mg.add_edge(1, 0)
    assert h1 == handle(0, 1, 0) and h2 == handle(0, 1, 1)
    assert mg.multiplicity(0, 1) == 2 and mg.mu() == 2
    assert other_end(h2, 1) == 0
    mg.remove_edge(h1)
    assert mg.multiplicity(0, 1) == 1
    assert not mg.has_handle(h1)
    assert mg.is_simple()


def test_degree_profile_classes():
    # star K_{1,3} plus an edge: degrees 3,2,2,1
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    prof = degree_profile(g, Fraction(1, 4))
    assert prof.Delta == 3 and prof.delta == 1
    assert set(prof.V_delta) == {3}
    assert not prof.regular


def test_degree_profile_regular():
    prof = degree_profile(Graph.cycle(5), Fraction(1, 10))
    assert prof.regular


def test_equality_and_hash():
    rng = random.Random(0)
    es = [(i, j) for i in range(6) for j in range(i + 1, 6) if rng.random() < 0.5]
    assert Graph(6, es) == Graph(6, list(reversed(es)))
    assert hash(Graph(6, es)) == hash(Graph(6, es))
