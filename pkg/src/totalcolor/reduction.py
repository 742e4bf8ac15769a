"""From total colorings of G to good edge colorings of G^M, and back.

G^M adds a vertex x = n to G, the edges of a complement matching M, and the
edges E(x) from x to every vertex left unsaturated by M.  An edge coloring of
G^M is good when it is proper, uses at most Δ(G)+2 colors, and gives the edges
of M ∪ E(x) pairwise different colors.  Each vertex of G then takes the color
of its unique M ∪ E(x) edge.

This module also classifies an input graph into the two situations the
coloring pipeline handles, and reduces the remaining graphs to them: by
peeling Hamilton-cycle matchings (lowering Δ while keeping M), or by removing
spanning linear forests until the graph is regular.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chromatics import PartialEdgeColoring, equalize, extend_coloring, vizing_color
from .errors import ConstructionError, OutOfScopeError, PreconditionError
from .graph import Graph, Multigraph, as_fraction, degree_profile, handle, norm
from .matching import complement_matching, dirac_hamilton_cycle, linking_paths
from .tools import Infeasible, equitable_vertex_coloring, hakimi_realize
from .verify import TotalColoring, Verdict, validate_good, validate_total


class NotGoodError(PreconditionError):
    def __init__(self, verdict: Verdict):
        super().__init__(verdict.first.clause, "; ".join(f"{v.clause}: {v.detail}" for v in verdict.violations))
        self.verdict = verdict


@dataclass(frozen=True)
class AugmentedGraph:
    base: Graph
    x: int
    M: tuple  # (u, v) pairs, u < v, non-edges of base
    Ex: tuple  # (w, x) pairs
    combined: Graph

    @property
    def special(self) -> tuple:
        return tuple(sorted(self.M + self.Ex))

    def special_handles(self) -> list:
        return [handle(u, v) for u, v in self.special]

    def multigraph(self) -> Multigraph:
        return self.combined.to_multigraph()


def build_augmented(g: Graph, M) -> AugmentedGraph:
    n = g.n
    pairs = sorted(norm(int(e[0]), int(e[1])) for e in M)
    seen = set()
    for u, v in pairs:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise PreconditionError("matching", f"bad pair {(u, v)}")
        if g.has_edge(u, v):
            raise PreconditionError("complement", f"{(u, v)} is an edge of G")
        if u in seen or v in seen:
            raise PreconditionError("matching", f"{(u, v)} shares a vertex with another M edge")
        seen.update((u, v))
    x = n
    Ex = tuple((w, x) for w in range(n) if w not in seen)
    combined = Graph(n + 1, g.edges() + pairs + list(Ex))
    ag = AugmentedGraph(g, x, tuple(pairs), Ex, combined)
    if combined.degree(x) != n - 2 * len(pairs):
        raise AssertionError("d(x) != n - 2|M|")
    return ag


def good_coloring_to_total(ag: AugmentedGraph, c) -> TotalColoring:
    """Total coloring of G: vertices take the color of their M ∪ E(x) edge."""
    verdict = validate_good(ag, c)
    if not verdict.ok:
        raise NotGoodError(verdict)
    asg = {h[:2]: col for h, col in (c.items() if isinstance(c, dict) else c.assignment.items())}
    tc = TotalColoring(k=ag.base.max_degree() + 2)
    for u, v in ag.special:
        w = u if v == ag.x else None
        col = asg[(u, v)]
        if w is not None:
            tc.vertex_color[w] = col
        else:
            tc.vertex_color[u] = col
            tc.vertex_color[v] = col
    for e in ag.base.edges():
        tc.edge_color[e] = asg[e]
    # renumber to 1..(colors used) so the palette is tight
    used = sorted(set(tc.vertex_color.values()) | set(tc.edge_color.values()))
    if used and used[-1] > tc.k:
        remap = {col: i + 1 for i, col in enumerate(used)}
        tc.vertex_color = {v: remap[col] for v, col in tc.vertex_color.items()}
        tc.edge_color = {e: remap[col] for e, col in tc.edge_color.items()}
    verdict = validate_total(ag.base, tc)
    if not verdict.ok:
        raise AssertionError(f"total coloring from a good coloring failed: {verdict.first}")
    return tc


@dataclass
class CaseAssignment:
    """Outcome of classification.

    ``which`` is ``case1`` or ``case2`` when (G, M) can go to the pipeline
    directly, and ``case2a`` / ``case2b`` when a reduction must run first.
    """

    which: str
    M: tuple
    eps: Fraction
    xi: Fraction
    diagnostics: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "M_size": len(self.M),
            "eps": str(self.eps),
            "xi": str(self.xi),
            "diagnostics": self.diagnostics,
            "warnings": list(self.warnings),
        }


def default_xi(eps) -> Fraction:
    eps = as_fraction(eps)
    return min(eps ** 3, Fraction(1, 100))


def check_hypotheses(g: Graph, eps, strict: bool) -> list[str]:
    """Raise on Δ ≥ 3n/4; raise (strict) or return warnings on a small δ."""
    n = g.n
    eps = as_fraction(eps)
    if n == 0:
        raise PreconditionError("order", "graph has no vertices")
    if 4 * g.max_degree() >= 3 * n:
        raise OutOfScopeError("max-degree", f"Δ={g.max_degree()} ≥ 3n/4={3 * n / 4}; covered by the Hilton–Hind theorem")
    warns = []
    if g.min_degree() < (1 + eps) * n / 2:
        msg = f"δ={g.min_degree()} < (1+ε)n/2={float((1 + eps) * n / 2):.2f}"
        if strict:
            raise PreconditionError("min-degree", msg)
        warns.append("min-degree: " + msg)
    return warns


def matching_target(n: int, eps) -> int:
    eps = as_fraction(eps)
    return max(0, math.floor(Fraction(n, 2) - Fraction(1, 10) * eps * n))


def case1_shape(prof, n: int, xi) -> bool:
    """Regular, or few minimum-degree vertices, n − |V_δ| odd and no middle degrees."""
    if prof.regular:
        return True
    return len(prof.V_delta) < xi * n and (n - len(prof.V_delta)) % 2 == 1 and not prof.middle


def classify_and_pick_matching(g: Graph, eps, xi=None, *, strict: bool = False) -> CaseAssignment:
    eps = as_fraction(eps)
    xi = default_xi(eps) if xi is None else as_fraction(xi)
    n = g.n
    warns = check_hypotheses(g, eps, strict)
    prof = degree_profile(g, xi)
    target = matching_target(n, eps)
    diag = {
        "n": n,
        "delta": prof.delta,
        "Delta": prof.Delta,
        "U_xi": len(prof.U_xi),
        "V_delta": len(prof.V_delta),
        "middle": len(prof.middle),
        "xi_n": float(xi * n),
        "target": target,
    }
    cm = complement_matching(g, xi, target, check=False)
    diag["complement_max_matching"] = cm.maximum
    if len(prof.U_xi) >= xi * n:
        if not cm.shortfall:
            diag["route"] = "large-U, complement matching of target size"
            return CaseAssignment("case2", cm.edges, eps, xi, diag, warns)
        p = n - 1 - prof.Delta
        col = equitable_vertex_coloring(g, prof.Delta + 1)
        classes: dict[int, list[int]] = {}
        for v, c in col.items():
            classes.setdefault(c, []).append(v)
        M0 = tuple(sorted(norm(*vs) for vs in classes.values() if len(vs) == 2))
        if len(M0) != p:
            raise AssertionError(f"equitable coloring gave {len(M0)} pairs, expected {p}")
        diag["route"] = "large-U, equitable-coloring matching of size n-1-Δ"
        return CaseAssignment("case2", M0, eps, xi, diag, warns)
    M = cm.edges
    if cm.shortfall:
        msg = f"complement matching {cm.maximum} < target {target}"
        if strict:
            raise ConstructionError("large-matching", msg)
        warns.append("large-matching: " + msg)
    if case1_shape(prof, n, xi):
        diag["route"] = "regular" if prof.regular else "few min-degree vertices, odd remainder"
        return CaseAssignment("case1", M, eps, xi, diag, warns)
    if len(prof.V_delta) >= xi * n:
        diag["route"] = "regularize"
        return CaseAssignment("case2a", M, eps, xi, diag, warns)
    diag["route"] = "peel matchings"
    return CaseAssignment("case2b", M, eps, xi, diag, warns)


@dataclass(frozen=True)
class Layer:
    kind: str  # "matching" or "forest"
    edges: tuple  # (u, v) pairs

    @property
    def colors(self) -> int:
        return 1 if self.kind == "matching" else 2


@dataclass
class Regularization:
    graph: Graph
    layers: list
    Delta_prime: int
    k: int
    L: Multigraph | None = None
    warnings: list = field(default_factory=list)


def near_perfect_from_cycle(cycle: list[int], skip: int | None = None) -> list[tuple[int, int]]:
    """Every second edge of a Hamilton cycle; for odd length the cycle is rotated so
    ``skip`` (if given) is the unsaturated vertex."""
    L = len(cycle)
    if L % 2 == 0:
        return [norm(cycle[i], cycle[i + 1]) for i in range(0, L, 2)]
    start = cycle.index(skip) if skip is not None else 0
    rot = cycle[start:] + cycle[:start]
    return [norm(rot[i], rot[i + 1]) for i in range(1, L - 1, 2)]


def regularize_case2a(g: Graph, eps, xi, *, check: bool = True, seed: int = 0) -> Regularization:
    """Strip a near-perfect matching (odd n, odd Δ) and then spanning linear forests
    whose leaves are matchings of an auxiliary degree-deficit multigraph, until
    the graph is regular."""
    eps, xi = as_fraction(eps), as_fraction(xi)
    n = g.n
    prof = degree_profile(g, xi)
    warns = []
    if check and (len(prof.V_delta) < xi * n or len(prof.U_xi) >= xi * n):
        raise PreconditionError("case2a", f"|V_δ|={len(prof.V_delta)}, |U_ξ|={len(prof.U_xi)}, ξn={float(xi * n):.2f}")
    if prof.regular:
        return Regularization(g, [], prof.Delta, 0, None, warns)
    layers = []
    cur = g
    if prof.Delta % 2 == 1 and n % 2 == 1:
        cyc = dirac_hamilton_cycle(g, seed=seed)
        v1 = min(prof.V_delta)
        F = near_perfect_from_cycle(cyc, v1)
        cur = g.with_edges_removed(F)
        layers.append(Layer("matching", tuple(sorted(F))))
    Dp = cur.max_degree()
    if Dp != prof.Delta - len(layers):
        raise AssertionError("removing F did not lower Δ by one")
    order = sorted(range(n), key=lambda v: (cur.degree(v), v))
    defic = [Dp - cur.degree(v) for v in order]  # non-increasing, as hakimi_realize wants
    L_sorted = hakimi_realize(defic)
    if isinstance(L_sorted, Infeasible):
        raise ConstructionError("hakimi", L_sorted.detail)
    # Hakimi's vertex i is order[i]
    L = Multigraph(n)
    for a, b, _ in L_sorted.edges():
        L.add_edge(order[a], order[b])
    for v in range(n):
        if L.degree(v) != Dp - cur.degree(v):
            raise AssertionError("auxiliary multigraph has the wrong degrees")
    lc = vizing_color(L)
    k0 = max(math.ceil(2 * xi * n), max(lc.colors_used(), default=0))
    if k0 > math.ceil(2 * xi * n):
        warns.append(f"k0 raised from ceil(2ξn)={math.ceil(2 * xi * n)} to {k0} (χ'(L) bound)")
    equalize(lc, k0)
    chunk = max(1, math.floor(Fraction(1, 2) * math.sqrt(xi) * n))
    matchings = []
    for col in range(1, k0 + 1):
        cls = lc.class_edges(col)
        for i in range(0, len(cls), chunk):
            matchings.append(cls[i:i + chunk])
    k = len(matchings)
    for i, Mi in enumerate(matchings):
        pairs = [(h[0], h[1]) for h in Mi]
        lf = linking_paths(cur, pairs, eps if check else None, seed=seed + i, check=check)
        edges = lf.edges()
        cur = cur.with_edges_removed(edges)
        layers.append(Layer("forest", tuple(edges)))
    if not cur.is_regular() or cur.max_degree() != Dp - 2 * k:
        raise AssertionError(f"result not {Dp - 2 * k}-regular: degrees {sorted(set(cur.degrees()))}")
    return Regularization(cur, layers, Dp, k, L, warns)


@dataclass
class Peeling:
    graph: Graph
    layers: list
    stop: str
    warnings: list = field(default_factory=list)


def peel_case2b(g: Graph, eps, xi, *, check: bool = True, seed: int = 0) -> Peeling:
    """Remove Hamilton-cycle matchings of G − V_δ until few-min-degree-odd or |V_δ| ≥ ξn."""
    eps, xi = as_fraction(eps), as_fraction(xi)
    n = g.n
    prof = degree_profile(g, xi)
    if prof.regular:
        raise PreconditionError("nonregular", "graph is regular")
    if check and (len(prof.V_delta) >= xi * n or len(prof.U_xi) >= xi * n):
        raise PreconditionError("case2b", f"|V_δ|={len(prof.V_delta)}, |U_ξ|={len(prof.U_xi)}, ξn={float(xi * n):.2f}")
    cur = g
    layers = []
    warns = []
    while True:
        prof = degree_profile(cur, xi)
        if prof.regular:
            return Peeling(cur, layers, "regular", warns)
        if len(prof.V_delta) >= xi * n:
            return Peeling(cur, layers, "min-degree-class", warns)
        if not prof.middle and (n - len(prof.V_delta)) % 2 == 1:
            return Peeling(cur, layers, "odd-remainder", warns)
        keep = [v for v in range(n) if v not in prof.V_delta]
        sub = Graph(len(keep), [(keep.index(u), keep.index(v)) for u, v in cur.edges()
                                if u not in prof.V_delta and v not in prof.V_delta])
        if 2 * sub.min_degree() < sub.n:
            raise ConstructionError("dirac", f"G − V_δ has δ={sub.min_degree()} < {sub.n}/2")
        cyc = [keep[i] for i in dirac_hamilton_cycle(sub, seed=seed + len(layers))]
        skip = None
        if len(cyc) % 2:
            low = [v for v in keep if cur.degree(v) < prof.Delta]
            skip = min(low) if low else min(keep)
        Mp = near_perfect_from_cycle(cyc, skip)
        nxt = cur.with_edges_removed(Mp)
        if nxt.max_degree() != prof.Delta - 1:
            raise AssertionError("peeled matching did not lower Δ")
        if nxt.min_degree() < (1 + eps) * n / 2:
            msg = f"δ fell to {nxt.min_degree()} < (1+ε)n/2 after {len(layers) + 1} peels"
            if check:
                raise ConstructionError("min-degree", msg)
            warns.append(msg)
        cur = nxt
        layers.append(Layer("matching", tuple(sorted(Mp))))


def lift_coloring(outer: AugmentedGraph, layers, inner) -> PartialEdgeColoring:
    """Good coloring of the outer G^M from a good coloring of the reduced graph's
    augmentation plus fresh colors: one per matching layer, two per forest."""
    inner_asg = inner.assignment if hasattr(inner, "assignment") else inner
    inner_base_delta = outer.base.max_degree() - sum(L.colors for L in layers)
    removed = {e for L in layers for e in L.edges}
    inner_edges = set(outer.base.edges()) - removed
    base_inner = Graph(outer.base.n, sorted(inner_edges))
    if base_inner.max_degree() != inner_base_delta:
        raise PreconditionError("palette-arithmetic",
                                f"Δ drop {outer.base.max_degree() - base_inner.max_degree()} != layer colors "
                                f"{sum(L.colors for L in layers)}")
    top = max(inner_asg.values(), default=0)
    if top > inner_base_delta + 2:
        raise PreconditionError("palette-arithmetic", f"inner coloring uses color {top} > Δ+2={inner_base_delta + 2}")
    mg = outer.multigraph()
    c = PartialEdgeColoring(mg, outer.base.max_degree() + 2)
    for h, col in inner_asg.items():
        c.assign(h, col)
    nxt = inner_base_delta + 3
    for L in layers:
        if L.kind == "matching":
            for u, v in L.edges:
                c.assign(handle(u, v), nxt)
            nxt += 1
        else:
            for e, parity in _forest_parities(L.edges):
                c.assign(handle(*e), nxt + parity)
            nxt += 2
    verdict = validate_good(outer, c)
    if not verdict.ok:
        raise AssertionError(f"lifted coloring is not good: {verdict.first}")
    return c


def _forest_parities(edges):
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(a) > 2 for a in adj.values()):
        raise PreconditionError("linear-forest", "a vertex has forest degree above 2")
    out = []
    seen = set()
    starts = sorted(v for v, a in adj.items() if len(a) == 1)
    for s in starts:
        if s in seen:
            continue
        prev, cur, par = None, s, 0
        seen.add(s)
        while True:
            nxts = [w for w in adj[cur] if w != prev]
            if not nxts:
                break
            w = nxts[0]
            out.append((norm(cur, w), par))
            par ^= 1
            prev, cur = cur, w
            seen.add(cur)
    if len(out) != len(edges):
        raise PreconditionError("linear-forest", "forest contains a cycle")
    return out


@dataclass
class ReductionPlan:
    """How to obtain a good coloring for (G, M): color ``core`` in ``case`` and lift through ``layers``."""

    assignment: CaseAssignment
    core: Graph
    case: str
    layers: list
    stages: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "classification": self.assignment.to_json(),
            "core_case": self.case,
            "core_Delta": self.core.max_degree(),
            "layers": [{"kind": L.kind, "edges": len(L.edges)} for L in self.layers],
            "stages": list(self.stages),
            "warnings": list(self.warnings),
        }


def plan_reduction(g: Graph, eps, xi=None, *, strict: bool = False, seed: int = 0) -> ReductionPlan:
    ca = classify_and_pick_matching(g, eps, xi, strict=strict)
    plan = ReductionPlan(ca, g, ca.which, [], [ca.which], list(ca.warnings))
    check = strict
    if ca.which in ("case1", "case2"):
        return plan
    core = g
    if ca.which == "case2b":
        pe = peel_case2b(g, ca.eps, ca.xi, check=check, seed=seed)
        plan.layers.extend(pe.layers)
        plan.warnings.extend(pe.warnings)
        plan.stages.append(f"peeled {len(pe.layers)} matchings, stop={pe.stop}")
        core = pe.graph
        if pe.stop in ("regular", "odd-remainder"):
            plan.core, plan.case = core, "case1"
            return plan
        prof = degree_profile(core, ca.xi)
        if len(prof.U_xi) >= ca.xi * core.n:
            plan.core, plan.case = core, "case2"
            return plan
    reg = regularize_case2a(core, ca.eps, ca.xi, check=check, seed=seed)
    plan.layers.extend(reg.layers)
    plan.warnings.extend(reg.warnings)
    plan.stages.append(f"regularized with {reg.k} forests")
    plan.core, plan.case = reg.graph, "case1"
    return plan


def fallback_good_coloring(ag: AugmentedGraph, *, seed: int = 0, cap: int | None = None,
                           restarts: int = 8) -> PartialEdgeColoring | None:
    """Kempe-chain local search for a good coloring of G^M with Δ(G)+2 colors.

    M ∪ E(x) is precolored rainbow and protected; the remaining edges are added
    by the fan/Kempe engine with random admissible switches when it stalls.
    Returns None when every restart runs out of budget.
    """
    k = ag.base.max_degree() + 2
    special = ag.special_handles()
    if len(special) > k:
        return None
    mg = ag.multigraph()
    base_edges = [handle(u, v) for u, v in ag.base.edges()]
    for r in range(restarts):
        rng = random.Random(seed * 1000003 + r)
        c = PartialEdgeColoring(mg, k)
        cols = list(range(1, k + 1))
        if r:
            rng.shuffle(cols)
        for h, col in zip(special, cols):
            c.assign(h, col)
        order = list(base_edges)
        if r:
            rng.shuffle(order)
        try:
            extend_coloring(c, special, special, heuristic=True, seed=seed + r, cap=cap, order=order)
        except ConstructionError:
            continue
        if validate_good(ag, c).ok:
            return c
    return None
