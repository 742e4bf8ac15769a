import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from totalcolor.generators import degree_window, random_dense_graph, random_regular_like


@settings(max_examples=25, deadline=None)
@given(st.integers(20, 120), st.integers(0, 10 ** 6), st.floats(0.4, 0.9))
def test_dense_graph_lands_in_window(n, seed, density):
    lo, hi = degree_window(n)
    g = random_dense_graph(n, density, seed=seed)
    assert lo <= g.min_degree() and g.max_degree() <= hi


def test_dense_graph_is_seeded():
    assert random_dense_graph(50, seed=3) == random_dense_graph(50, seed=3)
    assert random_dense_graph(50, seed=3) != random_dense_graph(50, seed=4)


def test_empty_window():
    with pytest.raises(ValueError):
        random_dense_graph(4, min_frac=0.9, max_frac=0.5)


@pytest.mark.parametrize("n, d", [(10, 3), (11, 4), (60, 40), (61, 40)])
def test_regular_like(n, d):
    g = random_regular_like(n, d, seed=1)
    assert g.is_regular() and g.max_degree() == d


def test_regular_like_parity():
    with pytest.raises(ValueError):
        random_regular_like(7, 3)
