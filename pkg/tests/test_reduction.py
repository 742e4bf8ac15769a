import random
from fractions import Fraction

import pytest

from instances import random_graph
from oracles import good_coloring_search, total_coloring_ok
from test_acceptance import _near_regular
from totalcolor.errors import OutOfScopeError, PreconditionError
from totalcolor.generators import random_dense_graph, random_regular_like
from totalcolor.graph import Graph, complement, handle
from totalcolor.matching import complement_matching, max_matching
from totalcolor.reduction import (
    Layer,
    NotGoodError,
    build_augmented,
    classify_and_pick_matching,
    default_xi,
    fallback_good_coloring,
    good_coloring_to_total,
    lift_coloring,
    matching_target,
    near_perfect_from_cycle,
    plan_reduction,
    regularize_case2a,
)
from totalcolor.verify import validate_good, validate_total


def test_build_augmented_shape():
    g = Graph.path(4)  # 0-1-2-3
    ag = build_augmented(g, [(0, 2)])
    assert ag.x == 4
    assert ag.Ex == ((1, 4), (3, 4))
    assert ag.combined.degree(4) == 2
    assert set(ag.special) == {(0, 2), (1, 4), (3, 4)}


@pytest.mark.parametrize("M, clause", [([(0, 1)], "complement"), ([(0, 2), (0, 3)], "matching"),
                                       ([(0, 9)], "matching")])
def test_build_augmented_rejects(M, clause):
    with pytest.raises(PreconditionError) as exc:
        build_augmented(Graph.path(4), M)
    assert exc.value.clause == clause


def test_good_coloring_to_total_rejects_bad_input():
    g = Graph.path(3)
    ag = build_augmented(g, [(0, 2)])
    bad = {handle(0, 1): 1, handle(1, 2): 2, handle(0, 2): 3, handle(1, 3): 3}
    with pytest.raises(NotGoodError) as exc:
        good_coloring_to_total(ag, bad)
    assert exc.value.clause == "rainbow"


def test_good_coloring_to_total_small_instances():
    rng = random.Random(31)
    done = 0
    while done < 100:
        n = rng.randrange(3, 10)
        g = random_graph(rng, n, 0.5)
        non = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
        M, used = [], set()
        for u, v in non:
            if u not in used and v not in used and rng.random() < 0.5:
                M.append((u, v))
                used |= {u, v}
        found = good_coloring_search(n, g.edges(), M)
        if found is None:
            continue
        tc = good_coloring_to_total(build_augmented(g, M), {handle(*e): c for e, c in found[2].items()})
        assert total_coloring_ok(n, g.edges(), tc.vertex_color, tc.edge_color)
        assert tc.colors_used() <= g.max_degree() + 2
        done += 1


def test_default_xi_and_target():
    assert default_xi(Fraction(1, 10)) == Fraction(1, 1000)
    assert default_xi(Fraction(1, 2)) == Fraction(1, 100)
    assert matching_target(100, Fraction(1, 10)) == 49


def test_classify_regular_is_case1():
    g = random_regular_like(40, 26, seed=1)
    ca = classify_and_pick_matching(g, Fraction(1, 10))
    assert ca.which == "case1"
    assert all(not g.has_edge(u, v) for u, v in ca.M)


def test_classify_nonregular_desk_scale_is_case2():
    # ξn < 1 at desk scale, so any vertex below Δ lands in U_ξ
    g = random_dense_graph(60, seed=4)
    ca = classify_and_pick_matching(g, Fraction(1, 10))
    assert ca.which == "case2"


def test_classify_out_of_scope():
    with pytest.raises(OutOfScopeError):
        classify_and_pick_matching(Graph.complete(8), Fraction(1, 10))


def test_classify_strict_min_degree():
    g = random_dense_graph(40, seed=2, min_frac=0.5, max_frac=0.7)
    if g.min_degree() < 0.55 * 40:
        with pytest.raises(PreconditionError):
            classify_and_pick_matching(g, Fraction(1, 10), strict=True)


def test_near_perfect_from_cycle():
    assert near_perfect_from_cycle([0, 1, 2, 3]) == [(0, 1), (2, 3)]
    F = near_perfect_from_cycle([4, 0, 3, 1, 2], skip=3)
    assert len(F) == 2 and all(3 not in e for e in F)


@pytest.mark.parametrize("seed", range(6))
def test_regularize_identity_per_vertex(seed):
    rng = random.Random(seed)
    g = _near_regular(rng, seed)
    reg = regularize_case2a(g, Fraction(1, 10), Fraction(1, 10), check=False, seed=seed)
    target = reg.Delta_prime - 2 * reg.k
    for v in range(g.n):
        removed = sum(1 for L in reg.layers for e in L.edges if v in e)
        assert g.degree(v) - removed == target
    # layers are matchings or linear forests
    for L in reg.layers:
        deg = {}
        for u, v in L.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        assert max(deg.values()) <= (1 if L.kind == "matching" else 2)


def test_regularize_strict_precondition():
    g = random_regular_like(30, 20, seed=0)
    with pytest.raises(PreconditionError):
        regularize_case2a(g.with_edges_removed([g.edges()[0]]), Fraction(1, 10), Fraction(1, 10), check=True)


def test_plan_routes_near_regular_graphs_to_regularization():
    rng = random.Random(5)
    g = _near_regular(rng, 5)
    plan = plan_reduction(g, Fraction(1, 10), Fraction(1, 10), seed=5)
    assert plan.assignment.which == "case2a" and plan.case == "case1"
    assert plan.core.is_regular()
    assert plan.core.m + sum(len(L.edges) for L in plan.layers) == g.m


def _lift_instance(seed):
    """Regular core H, a perfect matching F and a 3-edge path P outside H; G = H + F + P."""
    n = 20
    H = random_regular_like(n, 12, seed=seed)
    F = max_matching(complement(H)).pairs()
    assert len(F) == n // 2
    HF = H.with_edges_added(F)
    rest = complement(HF)
    rng = random.Random(seed)
    for _ in range(1000):
        a = rng.randrange(n)
        path = [a]
        while len(path) < 4:
            nxt = [w for w in rest.neighbors(path[-1]) if w not in path]
            if not nxt:
                break
            path.append(rng.choice(nxt))
        if len(path) == 4:
            break
    P = [tuple(sorted(path[i:i + 2])) for i in range(3)]
    return H, F, P, HF.with_edges_added(P)


@pytest.mark.parametrize("seed", range(3))
def test_lift_coloring_adds_layer_colors(seed):
    H, F, P, G = _lift_instance(seed)
    assert G.max_degree() == H.max_degree() + 3
    M = complement_matching(G, Fraction(1, 100), G.n // 2, check=False).edges
    inner = build_augmented(H, M)
    c = fallback_good_coloring(inner, seed=seed)
    assert c is not None
    outer = build_augmented(G, M)
    layers = [Layer("matching", tuple(F)), Layer("forest", tuple(P))]
    lifted = lift_coloring(outer, layers, c)
    assert validate_good(outer, lifted).ok
    assert len(set(lifted.assignment.values())) <= G.max_degree() + 2
    assert validate_total(G, good_coloring_to_total(outer, lifted)).ok


def test_lift_coloring_checks_palette_arithmetic():
    H, F, P, G = _lift_instance(0)
    M = complement_matching(G, Fraction(1, 100), G.n // 2, check=False).edges
    c = fallback_good_coloring(build_augmented(H, M), seed=0)
    with pytest.raises(PreconditionError):
        lift_coloring(build_augmented(G, M), [Layer("matching", tuple(F)), Layer("matching", tuple(P))], c)


def test_fallback_gives_good_coloring():
    g = random_dense_graph(30, seed=3)
    ca = classify_and_pick_matching(g, Fraction(1, 10))
    ag = build_augmented(g, ca.M)
    c = fallback_good_coloring(ag, seed=1)
    assert c is not None and validate_good(ag, c).ok
