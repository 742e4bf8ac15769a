from fractions import Fraction

import pytest

from oracles import total_coloring_ok
from totalcolor.generators import random_dense_graph, random_regular_like
from totalcolor.pipeline import asymptotic_params, run_pipeline
from totalcolor.reduction import build_augmented, good_coloring_to_total, plan_reduction
from totalcolor.verify import parity_check, validate_good

EPS = Fraction(1, 10)


def _run(g, **kw):
    plan = plan_reduction(g, EPS, seed=kw.get("seed", 0))
    return plan, run_pipeline(plan.core, plan.assignment.M, plan.case, EPS, **kw)


@pytest.mark.parametrize("n, seed", [(60, 0), (61, 1), (100, 2)])
def test_pipeline_nonregular_gives_good_coloring(n, seed):
    g = random_dense_graph(n, seed=seed)
    plan, res = _run(g, seed=seed)
    assert plan.case == "case2"
    assert res.ok, res.failure
    ag = build_augmented(g, plan.assignment.M)
    assert validate_good(ag, res.coloring).ok
    tc = good_coloring_to_total(ag, res.coloring)
    assert total_coloring_ok(g.n, g.edges(), tc.vertex_color, tc.edge_color)
    assert tc.colors_used() <= g.max_degree() + 2


@pytest.mark.parametrize("n, d", [(60, 40), (100, 64)])
def test_pipeline_regular(n, d):
    g = random_regular_like(n, d, seed=3)
    plan, res = _run(g)
    assert plan.case == "case1"
    assert res.ok, res.failure
    assert validate_good(build_augmented(g, plan.assignment.M), res.coloring).ok


def test_report_records_every_step():
    g = random_dense_graph(60, seed=5)
    _, res = _run(g)
    rep = res.to_json()
    steps = [s["step"] for s in rep["snapshots"]]
    for step in ("cstep1", "cstep2", "cstep3", "kstep1", "kstep2", "kstep3"):
        assert step in steps
    for name, rec in rep["assertions"].items():
        assert rec["checks"] >= 1
        assert rec["failures"] == 0 or rec["first_failure"] is not None


def test_snapshots_and_parity_at_boundaries():
    g = random_dense_graph(60, seed=6)
    plan, res = _run(g)
    st = res.state
    assert res.ok
    # the final coloring satisfies the parity identity on every vertex subset that is the whole host
    assert parity_check(st.c.graph, st.c, 0, colors=st.c.colors_used()).ok
    assert all(snap["R_A"] >= 0 and snap["R_B"] >= 0 for snap in st.snapshots)


def test_strict_mode_reports_the_first_failed_check():
    g = random_dense_graph(60, seed=0)
    _, res = _run(g, strict=True)
    # at desk scale the asymptotic palette is far larger than the number of special edges
    assert not res.ok
    assert res.failure["kind"] in ("assertion", "construction")
    assert "stage" in res.failure


def test_asymptotic_params_values():
    # n = 100, ξ = 1/1000.  Regular: k = ⌈Δ/2 + 1.1ξn⌉ + 4 = ⌈30.11⌉ + 4, s = 3ξn², r = ⌈√ξ·n⌉, t = 1.1ξn
    p = asymptotic_params("case1", 100, 60, 60, EPS, Fraction(1, 1000))
    assert (p.k, p.r) == (35, 4)
    assert p.s == pytest.approx(30.0) and p.t == pytest.approx(0.11)
    # nonregular: k = ⌈Δ/2 + n^(2/3)⌉ + 4 = ⌈56.54⌉ + 4, s = 3.5·n^(5/3), r = ⌈n^(5/6)⌉, t = n^(2/3)
    q = asymptotic_params("case2", 100, 70, 56, EPS, Fraction(1, 1000))
    assert (q.k, q.r) == (61, 47)
    assert q.s == pytest.approx(3.5 * 100 ** (5 / 3)) and q.t == pytest.approx(100 ** (2 / 3))
    assert q.k == q.k_asymptotic


def test_pipeline_is_deterministic():
    g = random_dense_graph(60, seed=8)
    _, a = _run(g, seed=4)
    _, b = _run(g, seed=4)
    assert a.to_json() == b.to_json()
    assert a.coloring.assignment == b.coloring.assignment
