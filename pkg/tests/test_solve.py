import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import total_coloring_ok
from totalcolor.generators import random_dense_graph, random_regular_like
from totalcolor.graph import Graph
from totalcolor.solve import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, graph_id, solve


def test_dense_graph_goes_through_the_pipeline():
    g = random_dense_graph(60, seed=11)
    res = solve(g)
    assert res.exit_code == EXIT_OK
    assert res.report.route in ("pipeline", "pipeline+repair")
    tc = res.coloring
    assert total_coloring_ok(g.n, g.edges(), tc.vertex_color, tc.edge_color)
    assert res.report.colors_used <= g.max_degree() + 2


def test_report_json_excludes_wall_time_by_default():
    res = solve(random_dense_graph(60, seed=2))
    js = res.report.to_json()
    assert "wall_time" not in js
    assert "wall_time" in res.report.to_json(timings=True)
    json.dumps(js)  # serializable


@pytest.mark.parametrize("g", [Graph.complete(4), Graph.cycle(5), Graph(1), Graph.path(2)])
def test_small_or_sparse_inputs_fall_back(g):
    res = solve(g)
    assert res.exit_code == EXIT_OK
    assert res.report.route in ("fallback", "exact")
    tc = res.coloring
    assert total_coloring_ok(g.n, g.edges(), tc.vertex_color, tc.edge_color)


@pytest.mark.parametrize("g", [Graph.complete(4), Graph.cycle(5)])
def test_strict_mode_rejects_hypothesis_violations(g):
    res = solve(g, mode="strict")
    assert res.exit_code == EXIT_INPUT
    assert res.report.status == "hypothesis-error"
    assert res.coloring is None


def test_certified_failure_when_no_route_applies():
    # C9: the complement matching leaves 5 special edges but Δ+2 = 4
    res = solve(Graph.cycle(9))
    assert res.exit_code == EXIT_FAILURE
    assert res.report.status == "certified-failure"
    assert res.coloring is None


def test_strict_mode_on_dense_graph_names_the_failure():
    res = solve(random_regular_like(60, 40, seed=2), mode="strict")
    assert res.exit_code == EXIT_FAILURE
    assert res.report.failure["route"] == "pipeline"


def test_unknown_mode():
    with pytest.raises(ValueError):
        solve(Graph.complete(3), mode="fast")


def test_graph_id_depends_on_labels_only_through_graph6():
    assert graph_id(Graph.path(3)) == graph_id(Graph(3, [(1, 2), (0, 1)]))
    assert graph_id(Graph.path(3)) != graph_id(Graph(3, [(0, 2), (0, 1)]))


def test_xi_override_is_recorded():
    res = solve(random_dense_graph(60, seed=3), Fraction(1, 10), Fraction(1, 50))
    assert res.report.xi == Fraction(1, 50)
    assert res.report.to_json()["xi"] == "1/50"


@settings(max_examples=15, deadline=None)
@given(st.integers(16, 48), st.integers(0, 10 ** 6))
def test_every_emission_is_a_valid_total_coloring(n, seed):
    g = random_dense_graph(n, seed=seed)
    res = solve(g, seed=seed % 7)
    if res.coloring is not None:
        tc = res.coloring
        assert total_coloring_ok(g.n, g.edges(), tc.vertex_color, tc.edge_color)
        assert tc.colors_used() <= g.max_degree() + 2
    else:
        assert res.exit_code == EXIT_FAILURE
