"""End-to-end driver: graph in, validated total coloring (or a diagnosis) out.

Route taken in best-effort mode, first success wins:

* ``pipeline``: classify, reduce, run the dense-graph pipeline on the core and
  lift the result through the removed layers;
* ``fallback``: Kempe-chain search for a good coloring of G^M on the original
  graph, with M a maximum complement matching;
* ``exact``: backtracking over vertices and edges (small graphs only).

Strict mode runs only the first route and reports the first failed check.
Every emitted coloring has passed ``validate_total``.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OutOfScopeError, PreconditionError, TotalColorError
from .graph import Graph, as_fraction
from .io import emit_graph6
from .matching import complement_matching
from .pipeline import run_pipeline
from .reduction import (
    build_augmented,
    default_xi,
    fallback_good_coloring,
    good_coloring_to_total,
    lift_coloring,
    plan_reduction,
)
from .verify import TotalColoring, brute_total_chromatic, validate_total

EXIT_OK = 0
EXIT_FAILURE = 2
EXIT_INPUT = 3

EXACT_MAX_N = 7


@dataclass
class RunReport:
    input_id: str
    n: int
    m: int
    Delta: int
    delta: int
    mode: str
    eps: Fraction
    xi: Fraction
    seed: int
    status: str = "pending"  # ok | certified-failure | hypothesis-error
    route: str | None = None
    case: str | None = None
    plan: dict | None = None
    pipeline: dict | None = None
    failure: dict | None = None
    colors_used: int | None = None
    verdict: dict | None = None
    warnings: list = field(default_factory=list)
    wall_time: float | None = None

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "input_id": self.input_id,
            "graph": {"n": self.n, "m": self.m, "Delta": self.Delta, "delta": self.delta},
            "mode": self.mode,
            "eps": str(self.eps),
            "xi": str(self.xi),
            "seed": self.seed,
            "status": self.status,
            "route": self.route,
            "case": self.case,
            "plan": self.plan,
            "pipeline": self.pipeline,
            "failure": self.failure,
            "colors_used": self.colors_used,
            "palette_bound": self.Delta + 2,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
        }
        if timings:
            out["wall_time"] = self.wall_time
        return out


@dataclass
class SolveResult:
    coloring: TotalColoring | None
    report: RunReport
    trace: list | None = None

    @property
    def exit_code(self) -> int:
        return {"ok": EXIT_OK, "hypothesis-error": EXIT_INPUT}.get(self.report.status, EXIT_FAILURE)


def graph_id(g: Graph) -> str:
    """Short content hash of the canonical graph6 encoding (labels as given)."""
    return hashlib.sha256(emit_graph6(g)).hexdigest()[:16]


def _emit(report: RunReport, g: Graph, tc: TotalColoring, route: str) -> TotalColoring:
    verdict = validate_total(g, tc)
    report.verdict = verdict.to_json()
    if not verdict.ok:
        raise AssertionError(f"{route} produced an invalid total coloring: {verdict.first}")
    if tc.colors_used() > g.max_degree() + 2:
        raise AssertionError(f"{route} used {tc.colors_used()} colors > Δ+2")
    report.route = route
    report.status = "ok"
    report.colors_used = tc.colors_used()
    return tc


def _pipeline_route(g: Graph, report: RunReport, strict: bool, trace: bool):
    plan = plan_reduction(g, report.eps, report.xi, strict=strict, seed=report.seed)
    report.plan = plan.to_json()
    report.case = plan.case
    report.warnings.extend(plan.warnings)
    res = run_pipeline(plan.core, plan.assignment.M, plan.case, report.eps, report.xi, strict=strict,
                       seed=report.seed, trace=trace)
    report.pipeline = res.to_json()
    log = res.state.trace
    if not res.ok:
        report.failure = dict(res.failure, route="pipeline")
        return None, log
    outer = build_augmented(g, plan.assignment.M)
    lifted = lift_coloring(outer, plan.layers, res.coloring)
    repaired = "repaired" in res.state.stats
    return (good_coloring_to_total(outer, lifted), "pipeline+repair" if repaired else "pipeline"), log


def _fallback_route(g: Graph, report: RunReport):
    half = g.n // 2
    cm = complement_matching(g, report.xi, half, check=False)
    ag = build_augmented(g, cm.edges)
    c = fallback_good_coloring(ag, seed=report.seed)
    if c is None:
        return None
    return good_coloring_to_total(ag, c)


def solve(g: Graph, eps=Fraction(1, 10), xi=None, *, mode: str = "best-effort", seed: int = 0,
          trace: bool = False, input_id: str | None = None) -> SolveResult:
    """Total coloring of ``g`` with at most Δ+2 colors, with a run report."""
    if mode not in ("strict", "best-effort"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    eps = as_fraction(eps)
    xi = default_xi(eps) if xi is None else as_fraction(xi)
    strict = mode == "strict"
    report = RunReport(input_id or graph_id(g), g.n, g.m, g.max_degree(), g.min_degree(), mode, eps, xi, seed)
    log = None
    tc = None
    try:
        out, log = _pipeline_route(g, report, strict, trace)
        if out is not None:
            tc = _emit(report, g, out[0], out[1])
    except (OutOfScopeError, PreconditionError) as exc:
        report.failure = {"route": "pipeline", "kind": "hypothesis", "clause": exc.clause, "detail": exc.detail}
        if strict:
            report.status = "hypothesis-error"
    except TotalColorError as exc:
        report.failure = {"route": "pipeline", "kind": type(exc).__name__, "detail": str(exc)}
    if tc is None and not strict and report.status != "hypothesis-error":
        try:
            fb = _fallback_route(g, report)
        except TotalColorError as exc:
            report.warnings.append(f"fallback: {exc}")
            fb = None
        if fb is not None:
            tc = _emit(report, g, fb, "fallback")
        elif g.n <= EXACT_MAX_N:
            _, exact = brute_total_chromatic(g, max_n=EXACT_MAX_N, witness=True)
            tc = _emit(report, g, exact, "exact")
    if tc is None and report.status == "pending":
        report.status = "certified-failure"
    report.wall_time = round(time.perf_counter() - t0, 4)
    return SolveResult(tc, report, log)
