import random

import pytest

from instances import random_graph
from oracles import total_chromatic_small
from totalcolor.errors import PreconditionError
from totalcolor.graph import Graph, Multigraph, handle
from totalcolor.reduction import build_augmented
from totalcolor.verify import (
    TotalColoring,
    brute_total_chromatic,
    parity_check,
    rainbow_verdict,
    validate_edge_coloring,
    validate_good,
    validate_total,
)


def _triangle_coloring():
    # K3 with 3 colors: vertex i gets i+1, edge opposite to i gets i+1
    return TotalColoring({0: 1, 1: 2, 2: 3}, {(1, 2): 1, (0, 2): 2, (0, 1): 3}, 3)


def test_valid_total_coloring():
    assert validate_total(Graph.complete(3), _triangle_coloring()).ok


@pytest.mark.parametrize(
    "mutate, clause",
    [
        (lambda tc: tc.vertex_color.pop(0), "coverage"),
        (lambda tc: tc.edge_color.pop((0, 1)), "coverage"),
        (lambda tc: tc.edge_color.__setitem__((0, 3), 1), "coverage"),
        (lambda tc: tc.vertex_color.__setitem__(1, 1), "vertex-vertex"),
        (lambda tc: tc.edge_color.__setitem__((0, 1), 2), "edge-edge"),
        (lambda tc: tc.vertex_color.__setitem__(0, 9), "palette"),
    ],
)
def test_total_violations_are_named(mutate, clause):
    tc = _triangle_coloring()
    mutate(tc)
    verdict = validate_total(Graph.complete(3), tc)
    assert not verdict.ok and verdict.first.clause == clause


def test_vertex_edge_clash():
    g = Graph.path(2)
    tc = TotalColoring({0: 1, 1: 2}, {(0, 1): 1}, 3)
    assert validate_total(g, tc).first.clause == "vertex-edge"


def test_total_coloring_json_roundtrip():
    tc = _triangle_coloring()
    back = TotalColoring.from_json(tc.to_json())
    assert back == tc
    with pytest.raises(ValueError):
        TotalColoring.from_json({"vertices": [[0]]})


# known total chromatic numbers: K_n is n for odd n and n+1 for even n;
# C_n is 3 when 3 divides n and 4 otherwise
@pytest.mark.parametrize("n", range(1, 8))
def test_total_chromatic_complete(n):
    assert brute_total_chromatic(Graph.complete(n)) == (n if n % 2 else n + 1)


@pytest.mark.parametrize("n", range(3, 9))
def test_total_chromatic_cycles(n):
    assert brute_total_chromatic(Graph.cycle(n)) == (3 if n % 3 == 0 else 4)


def test_total_chromatic_matches_independent_search():
    rng = random.Random(12)
    for _ in range(25):
        g = random_graph(rng, rng.randrange(2, 7), rng.uniform(0.2, 0.9))
        assert brute_total_chromatic(g) == total_chromatic_small(g.n, g.edges())


def test_total_chromatic_size_guard():
    with pytest.raises(PreconditionError):
        brute_total_chromatic(Graph(9), max_n=8)


def test_validate_good_clauses():
    g = Graph.path(3)  # 0-1-2, Δ = 2 so 4 colors
    ag = build_augmented(g, [(0, 2)])
    good = {handle(0, 1): 1, handle(1, 2): 2, handle(0, 2): 3, handle(1, 3): 4}
    assert validate_good(ag, good).ok
    bad = dict(good)
    bad[handle(1, 3)] = 3  # special edges share color 3
    assert "rainbow" in validate_good(ag, bad).clauses()
    bad = dict(good)
    bad[handle(1, 2)] = 1
    assert "proper" in validate_good(ag, bad).clauses()
    bad = dict(good)
    del bad[handle(0, 1)]
    assert "coverage" in validate_good(ag, bad).clauses()


def test_validate_good_palette_clause():
    g = Graph(4, [(0, 1), (2, 3)])  # Δ = 1, so at most 3 colors
    ag = build_augmented(g, [])
    c = {handle(0, 1): 1, handle(2, 3): 1, handle(0, 4): 2, handle(1, 4): 3, handle(2, 4): 4, handle(3, 4): 5}
    assert "palette" in validate_good(ag, c).clauses()


def test_edge_coloring_and_rainbow_verdicts():
    mg = Multigraph(3, [(0, 1), (0, 1), (1, 2)])
    c = {(0, 1, 0): 1, (0, 1, 1): 2, (1, 2, 0): 3}
    assert validate_edge_coloring(mg, c, 3).ok
    assert validate_edge_coloring(mg, {**c, (1, 2, 0): 2}).first.clause == "proper"
    assert validate_edge_coloring(mg, {(0, 1, 0): 1}).first.clause == "coverage"
    assert validate_edge_coloring(mg, {(0, 1, 0): 1}, total=False).ok
    assert rainbow_verdict(c, [(0, 1, 0), (0, 1, 1)]).ok
    assert not rainbow_verdict({**c, (1, 2, 0): 1}, [(0, 1, 0), (1, 2, 0)]).ok


def test_parity_check_detects_a_bad_count():
    g = Graph.path(3)
    c = {handle(0, 1): 1}
    # color 1 is missing only at vertex 2: 1 vertex out of 3, same parity
    assert parity_check(g, c, 1).ok
    # restricted to {0, 2} the count is 1 of 2, odd against even
    assert not parity_check(g, c, 1, vertices=[0, 2]).ok
