"""Good colorings of G^M for dense graphs in the two pipeline cases.

The construction phase splits the vertices of G1 (G^M, or G^M − x when n is
even) into balanced halves A and B, adds a few edges on one side to obtain the
multigraph Q, and picks k rainbow edges M1 ⊆ M ∪ E(x).  The coloring phase
then

1. colors Q_AB = Q[A] ∪ Q[B] ∪ M1 with k colors (M1 rainbow) and balances the
   classes,
2. grows every class 1..k along short alternating paths until it saturates
   the target vertices, uncoloring a few edges inside A and B (the sets R_A and
   R_B),
3. colors R_A ∪ R_B with ℓ new colors and extends each new class by a
   bipartite matching across (A, B),
4. finishes the remaining bipartite graph with Δ+2−k−ℓ fresh colors, keeping
   the uncolored edges of M ∪ E(x) rainbow.

Every inequality the construction relies on is evaluated and logged with both
sides.  In strict mode a failed inequality aborts with
:class:`AssertionFailure`; in best-effort mode it becomes a warning, the
palette split (k, ℓ) and the saturation targets are chosen from the instance
instead of the asymptotic formulas, and the final coloring is validated
independently regardless.
"""

from __future__ import annotations

import math
import operator
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .chromatics import PartialEdgeColoring, equalize, equalize_with_rainbow, kempe_chain, kempe_switch, vizing_color
from .chromatics.fans import _rainbow_safe, extend_coloring
from .chromatics.theorems import extend_rainbow_coloring_a, extend_rainbow_coloring_b
from .errors import AssertionFailure, ConstructionError, PreconditionError
from .graph import Graph, Multigraph, as_fraction, degree_profile, handle, iter_bits, other_end
from .matching import hopcroft_karp
from .reduction import AugmentedGraph, build_augmented
from .tools import balanced_partition, partition_bound, partition_violations
from .verify import parity_check, validate_good

_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
}

INF = float("inf")


def _num(x):
    if isinstance(x, bool) or isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else round(float(x), 6)
    if isinstance(x, float):
        return x if math.isinf(x) else round(x, 6)
    return x


@dataclass
class PipelineParams:
    """Palette sizes and budgets.  ``k_asymptotic`` and ``ell_asymptotic`` keep the
    asymptotic values; ``k`` and ``ell`` are the ones actually used."""

    case: str
    n: int
    m: int
    Delta: int
    delta: int
    eps: Fraction
    xi: Fraction
    k: int
    s: float
    r: int
    t: float
    ell: int = 0
    p: int = 0
    q1: int = 0
    k_asymptotic: int = 0
    ell_asymptotic: int = 0
    adaptive: bool = False

    def to_json(self) -> dict:
        return {key: (str(v) if isinstance(v, Fraction) else _num(v)) for key, v in self.__dict__.items()}


def asymptotic_params(case: str, n: int, Delta: int, delta: int, eps, xi) -> PipelineParams:
    eps, xi = as_fraction(eps), as_fraction(xi)
    m = n if n % 2 == 0 else n + 1
    if case == "case1":
        k = math.ceil(Fraction(Delta, 2) + Fraction(11, 10) * xi * n) + 4
        s = float(3 * xi * n * n)
        r = math.ceil(math.sqrt(xi) * n)
        t = float(Fraction(11, 10) * xi * n)
    elif case == "case2":
        k = math.ceil(Delta / 2 + n ** (2 / 3)) + 4
        s = 3.5 * n ** (5 / 3)
        r = math.ceil(n ** (5 / 6))
        t = n ** (2 / 3)
    else:
        raise PreconditionError("case", f"unknown pipeline case {case!r}")
    return PipelineParams(case, n, m, Delta, delta, eps, xi, k, s, r, t, k_asymptotic=k, ell_asymptotic=2 * r)


@dataclass(frozen=True)
class MccPair:
    """Two vertices missing the color ``color``, to be joined by an alternating path."""

    color: int
    a: int
    b: int
    kind: str  # "crossing" or "same-side"


@dataclass
class PipelineResult:
    ok: bool
    coloring: PartialEdgeColoring | None
    state: "PipelineState"
    failure: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "failure": self.failure, **self.state.report()}


class PipelineState:
    """All data the steps share.  Vertices are those of G^M, with x = n."""

    def __init__(self, g: Graph, M, case: str, eps, xi, *, strict: bool = False, seed: int = 0,
                 trace: bool = False):
        if case not in ("case1", "case2"):
            raise PreconditionError("case", f"unknown pipeline case {case!r}")
        self.g = g
        self.ag: AugmentedGraph = build_augmented(g, M)
        self.case = case
        self.strict = strict
        self.seed = seed
        self.n = n = g.n
        self.x = n
        self.prof = degree_profile(g, xi)
        self.params = asymptotic_params(case, n, self.prof.Delta, self.prof.delta, eps, xi)
        self.params.adaptive = not strict
        self.host = self.ag.multigraph()
        self.gm_edges = frozenset(self.host.edges())
        self.M = frozenset(handle(u, v) for u, v in self.ag.M)
        self.Ex = frozenset(handle(u, v) for u, v in self.ag.Ex)
        self.special = self.M | self.Ex
        self.special_at = {}
        for h in self.special:
            for w in h[:2]:
                if w != self.x:
                    self.special_at[w] = h
        self.x_in_Q = n % 2 == 1
        self.V1 = frozenset(range(n + 1)) if self.x_in_Q else frozenset(range(n))
        self.Q = {h for h in self.gm_edges if h[0] in self.V1 and h[1] in self.V1}
        self.added: set = set()
        self.U = self.prof.U_xi
        self.v1: int | None = None
        self.pairs: list = []
        self.A: frozenset = frozenset()
        self.B: frozenset = frozenset()
        self.side: dict = {}
        self.B0: tuple = ()
        self.S0: frozenset = frozenset()
        self.M1: set = set()
        self.M2: set = set()
        self.QAB: set = set()
        self.c: PartialEdgeColoring | None = None
        self.phi0: dict = {}
        self.W: frozenset = frozenset()
        self.Ustar: frozenset = frozenset()
        self.budget: dict = {}
        self.unc: dict = {}
        self.rdeg: dict = {}
        self.R: set = set()
        self.mcc_pairs: list = []
        self.assertions: dict = {}
        self.warnings: list = []
        self.snapshots: list = []
        self.trace: list | None = [] if trace else None
        self.k_slack = 4
        self.overflow = False
        self.stats = {"mcc_paths": 0, "path_lengths": {}, "w_transfers": 0, "v1_swaps": 0, "parity_kempe": 0,
                      "relaxed_good": 0, "unpaired": 0, "H_matched": 0}
        self.step = "init"

    # -- bookkeeping -------------------------------------------------------

    def check(self, name: str, lhs, rel: str, rhs) -> bool:
        """Evaluate ``lhs rel rhs``; log it; raise in strict mode when false."""
        ok = bool(_OPS[rel](lhs, rhs))
        rec = self.assertions.setdefault(name, {"relation": rel, "checks": 0, "failures": 0, "first_failure": None})
        rec["checks"] += 1
        if not ok:
            rec["failures"] += 1
            if rec["first_failure"] is None:
                rec["first_failure"] = {"step": self.step, "lhs": _num(lhs), "rhs": _num(rhs)}
            if self.strict:
                raise AssertionFailure(name, _num(lhs), _num(rhs), rel)
        return ok

    def warn(self, msg: str) -> None:
        if self.strict:
            raise ConstructionError(self.step, msg)
        self.warnings.append(f"{self.step}: {msg}")

    def snapshot(self) -> dict:
        snap = {
            "step": self.step,
            "colored": len(self.c.assignment) if self.c is not None else 0,
            "R_A": self.r_size(0),
            "R_B": self.r_size(1),
            "M1": [list(h[:2]) for h in sorted(self.M1)],
            "M2": [list(h[:2]) for h in sorted(self.M2)],
            "added": len(self.added),
        }
        self.snapshots.append(snap)
        return snap

    def report(self) -> dict:
        return {
            "case": self.case,
            "mode": "strict" if self.strict else "best-effort",
            "params": self.params.to_json(),
            "v1": self.v1,
            "sizes": {"A": len(self.A), "B": len(self.B), "B0": len(self.B0), "S0": sorted(self.S0),
                      "W": len(self.W), "U_star": len(self.Ustar), "U": len(self.U)},
            "assertions": {k: dict(v) for k, v in sorted(self.assertions.items())},
            "stats": dict(self.stats),
            "warnings": list(self.warnings),
            "snapshots": list(self.snapshots),
        }

    def _boundary(self, step: str, vertices=None) -> None:
        """Step boundary: parity of the colors 1..k on V(Q_AB) and the M1 rainbow invariant.

        Pass ``vertices`` to check every used color on another vertex set.
        """
        self.step = step
        if self.c is not None:
            if vertices is None:
                vs, cols = sorted(self.V1 | self.S0), range(1, self.params.k + 1)
            else:
                vs, cols = vertices, sorted(self.c.colors_used())
            verdict = parity_check(self.c.graph, self.c, 0, vs, colors=cols)
            if not verdict.ok:
                raise AssertionError(f"parity failed at {step}: {verdict.first}")
            cols = {self.c.color_of(h) for h in self.M1}
            self.check("M1-rainbow", len(cols - {None}), "==", len(self.M1))
        self.snapshot()

    # -- structure ---------------------------------------------------------

    def d_G1(self, v: int) -> int:
        return sum(1 for w in self.host.neighbors(v) if w in self.V1) if v in self.V1 else 0

    def q_degree(self, v: int) -> int:
        return sum(1 for h in self.Q if v in h[:2])

    def is_internal(self, h) -> bool:
        s = self.side
        return h[0] in s and h[1] in s and s[h[0]] == s[h[1]]

    def is_crossing(self, h) -> bool:
        s = self.side
        return h[0] in s and h[1] in s and s[h[0]] != s[h[1]]

    def add_q_edge(self, u: int, v: int):
        h = self.host.add_edge(u, v)
        self.Q.add(h)
        self.added.add(h)
        return h

    def added_at(self, v: int) -> int:
        return sum(1 for h in self.added if v in h[:2])

    def r_size(self, s: int) -> int:
        return sum(1 for h in self.R if self.side.get(h[0]) == s)

    # -- step-2 machinery --------------------------------------------------

    def _build_unc(self) -> None:
        """Uncolored crossing non-special Q edges as neighbor bitsets."""
        self.unc = {v: 0 for v in self.V1}
        for h in self.Q:
            if h in self.special or not self.is_crossing(h) or self.c.is_colored(h):
                continue
            u, v = h[0], h[1]
            self.unc[u] |= 1 << v
            self.unc[v] |= 1 << u

    def _uncolor_internal(self, h) -> None:
        self.c.unassign(h)
        self.R.add(h)
        for w in h[:2]:
            self.rdeg[w] = self.rdeg.get(w, 0) + 1

    def _color_crossing(self, u: int, v: int, i: int) -> None:
        h = handle(u, v)
        self.c.assign(h, i)
        if h not in self.special:
            self.unc[u] &= ~(1 << v)
            self.unc[v] &= ~(1 << u)

    def e_i(self, i: int):
        for h in self.M1:
            if self.c.color_of(h) == i:
                return h
        return None

    def two_step(self, v: int, i: int, elig: int, rlim: float, eh=None, via=None) -> dict:
        """b2 → (b1, h): v–b1 uncolored crossing, h = b1b2 a good internal i-edge.

        ``via`` overrides the bitset of first-edge neighbors (used for x, whose
        crossing edges are special).
        """
        out = {}
        first = (self.unc.get(v, 0) if via is None else via) & elig
        side = self.side
        for b1 in iter_bits(first):
            h = self.c.edge_at(b1, i)
            if h is None or h == eh:
                continue
            b2 = h[1] if h[0] == b1 else h[0]
            if side.get(b2) != side[b1] or not (elig >> b2) & 1:
                continue
            if self.rdeg.get(b1, 0) >= rlim or self.rdeg.get(b2, 0) >= rlim:
                continue
            if b2 not in out:
                out[b2] = (b1, h)
        return out

    def find_path(self, a: int, b: int, i: int, elig: int, rlim: float, eh) -> list[int] | None:
        """Shortest admissible alternating path a … b (lengths 1, 5 across; 3, 7 same side)."""
        elig &= ~((1 << a) | (1 << b))
        if self.side[a] != self.side[b]:
            if (self.unc[a] >> b) & 1:
                return [a, b]
            Xa = self.two_step(a, i, elig, rlim, eh)
            Yb = self.two_step(b, i, elig, rlim, eh)
            ymask = 0
            for a2 in Yb:
                ymask |= 1 << a2
            for b2 in sorted(Xa):
                b1 = Xa[b2][0]
                for a2 in iter_bits(self.unc[b2] & ymask):
                    a1 = Yb[a2][0]
                    if len({a, b1, b2, a2, a1, b}) == 6:
                        return [a, b1, b2, a2, a1, b]
            return None
        Xa = self.two_step(a, i, elig, rlim, eh)
        for b2 in sorted(Xa):
            if (self.unc[b2] >> b) & 1 and Xa[b2][0] != b:
                return [a, Xa[b2][0], b2, b]
        Xb = self.two_step(b, i, elig, rlim, eh)
        xbmask = 0
        for v in Xb:
            xbmask |= 1 << v
        side_a = self.side[a]
        for b2 in sorted(Xa):
            b1 = Xa[b2][0]
            for a2 in iter_bits(self.unc[b2] & elig):
                if self.side[a2] != side_a:
                    continue
                h = self.c.edge_at(a2, i)
                if h is None or h == eh:
                    continue
                a2s = other_end(h, a2)
                if self.side.get(a2s) != side_a or not (elig >> a2s) & 1:
                    continue
                if self.rdeg.get(a2, 0) >= rlim or self.rdeg.get(a2s, 0) >= rlim:
                    continue
                for b2s in iter_bits(self.unc[a2s] & xbmask):
                    b1s = Xb[b2s][0]
                    if len({a, b1, b2, a2, a2s, b2s, b1s, b}) == 8:
                        return [a, b1, b2, a2, a2s, b2s, b1s, b]
        return None

    def apply_path(self, path: list[int], i: int) -> list:
        """Exchange along ``path``: uncolored edges get i, the i-edges are uncolored."""
        before = self.c.missing_count(i, self.V1)
        removed = []
        for j in range(1, len(path) - 1, 2):
            h = self.c.edge_at(path[j], i)
            if h is None or other_end(h, path[j]) != path[j + 1]:
                raise AssertionError("path is not alternating")
            self._uncolor_internal(h)
            removed.append(h)
        for j in range(0, len(path) - 1, 2):
            self._color_crossing(path[j], path[j + 1], i)
        after = self.c.missing_count(i, self.V1)
        if before - after != 2:
            raise AssertionError(f"path exchange changed the missing count of {i} by {before - after}")
        if self.trace is not None:
            self.trace.append({"op": "mcc", "color": i, "path": list(path), "R_add": [list(h) for h in removed]})
        L = len(path) - 1
        self.stats["path_lengths"][str(L)] = self.stats["path_lengths"].get(str(L), 0) + 1
        self.stats["mcc_paths"] += 1
        self._check_R()
        return removed

    def _check_R(self) -> None:
        p = self.params
        self.check("R_A-size", self.r_size(0), "<=", p.s)
        self.check("R_B-size", self.r_size(1), "<=", p.s)
        self.check("R-max-degree", max(self.rdeg.values(), default=0), "<", p.r)


# ---------------------------------------------------------------------------
# construction phase


def cstep1_partition(state: PipelineState) -> PipelineState:
    """Partner the vertices of G1 and split them into balanced halves A, B with v1 ∈ B."""
    st = state
    st.step = "cstep1"
    n, xi, prof = st.n, st.params.xi, st.prof
    m = len(st.V1)
    st.check("m-even", m % 2, "==", 0)
    dG1 = {v: st.d_G1(v) for v in st.V1}
    order = sorted(st.V1, key=lambda v: (dG1[v], v))
    st.v1 = st.x if st.x_in_Q else order[0]
    st.check("v1-min-degree", dG1[st.v1], "==", dG1[order[0]])
    if not st.x_in_Q:
        st.check("v1-in-V_delta", int(st.v1 in prof.V_delta), "==", 1)
    paired: set = set()
    pairs: list = []

    def take(u, v):
        pairs.append((u, v))
        paired.update((u, v))

    if st.case == "case2":
        pool = sorted(st.U)
        for j in range(math.floor(xi * n / 2)):
            if 2 * j + 1 < len(pool):
                take(pool[2 * j], pool[2 * j + 1])
    elif not prof.regular:
        pool = sorted(prof.V_delta - {st.v1})
        for j in range(len(pool) // 2):
            take(pool[2 * j], pool[2 * j + 1])
    for h in sorted(st.M):
        if h[0] not in paired and h[1] not in paired:
            take(h[0], h[1])
    rest = [v for v in sorted(st.V1) if v not in paired]
    for j in range(len(rest) // 2):
        take(rest[2 * j], rest[2 * j + 1])
    st.pairs = pairs
    # G1 as a simple graph on the vertex range it occupies
    G1 = Graph(m, [h[:2] for h in st.Q])
    part = balanced_partition(G1, pairs, seed=st.seed)
    viol = partition_violations(G1, part)
    if viol:
        raise ConstructionError("cstep1", f"partition validator: {viol[:3]}")
    A, B = part.A, part.B
    if st.v1 in A:
        A, B = B, A
    st.A, st.B = frozenset(A), frozenset(B)
    st.side = {v: 0 for v in A}
    st.side.update({v: 1 for v in B})
    partner = {}
    for u, v in pairs:
        partner[u], partner[v] = v, u
    split = sum(1 for h in st.M if partner.get(h[0]) != h[1])
    st.check("M-edges-not-partnered", split, "<=", xi * n)
    eA = sum(1 for h in st.Q if st.side[h[0]] == st.side[h[1]] == 0)
    eB = sum(1 for h in st.Q if st.side[h[0]] == st.side[h[1]] == 1)
    st.eG1 = (eA, eB)
    if st.case == "case1":
        if prof.regular and n % 2 == 0:
            st.check("side-balance-equal", eA, "==", eB)
        else:
            D, d1 = prof.Delta, dG1[st.v1]
            st.check("side-balance-lower", Fraction(D - d1, 2) - xi * n, "<=", eA - eB)
            st.check("side-balance-upper", eA - eB, "<=", Fraction(D + 1 - d1, 2) + xi * n)
    st._boundary("cstep1", vertices=sorted(st.V1))
    return st


def _pick_side_pairs(st: PipelineState, side_vertices, count: int) -> list:
    """``count`` disjoint pairs on one side, non-adjacent pairs first, lowest indices first."""
    vs = sorted(v for v in side_vertices if v != st.v1)
    out, used = [], set()
    for want_nonadj in (True, False):
        for a in vs:
            if len(out) == count:
                return out
            if a in used:
                continue
            for b in vs:
                if b <= a or b in used:
                    continue
                if want_nonadj and st.host.multiplicity(a, b):
                    continue
                out.append((a, b))
                used.update((a, b))
                break
    if len(out) < count:
        raise ConstructionError("cstep2", f"only {len(out)} of {count} disjoint pairs available on one side")
    return out


def _pick_B0(st: PipelineState, size: int) -> tuple:
    cand = sorted(v for v in st.B if v != st.v1)
    if size > len(cand):
        raise ConstructionError("cstep2", f"B0 needs {size} vertices, B has {len(cand)}")
    first = [v for v in cand if not st.host.multiplicity(st.v1, v)]
    second = [v for v in cand if st.host.multiplicity(st.v1, v)]
    return tuple(sorted((first + second)[:size]))


def cstep2_build_q(state: PipelineState) -> PipelineState:
    """Add edges on one side so that Q has the degree or edge balance later steps need."""
    st = state
    st.step = "cstep2"
    n, prof, xi = st.n, st.prof, st.params.xi
    D = prof.Delta
    d1 = st.d_G1(st.v1)
    eA, eB = st.eG1
    regular = prof.regular
    q1 = 0
    table = None
    if st.case == "case2":
        if st.x_in_Q:
            size = math.ceil(Fraction(D - d1, 2))
            st.B0 = _pick_B0(st, max(size, 0))
            for v in st.B0:
                st.add_q_edge(st.v1, v)
            table = len(st.B0)
            st.check("B0-size", len(st.B0), "==", size)
        else:
            table = 0
    else:
        diff = eA - eB
        if n % 2 == 0 and regular:
            table = 0
        elif st.x_in_Q or d1 < D + 1 - 2 * xi * n:
            st.check("side-balance-nonnegative", diff, ">=", 0)
            if diff >= 0:
                st.B0 = _pick_B0(st, diff)
                for v in st.B0:
                    st.add_q_edge(st.v1, v)
                table = diff
            else:
                small = st.A
                pairs = _pick_side_pairs(st, small, -diff)
                for a, b in pairs:
                    st.add_q_edge(a, b)
                st.B0 = tuple(sorted({w for pr in pairs for w in pr}))
        else:
            small = st.B if diff >= 0 else st.A
            pairs = _pick_side_pairs(st, small, abs(diff))
            for a, b in pairs:
                st.add_q_edge(a, b)
            st.B0 = tuple(sorted({w for pr in pairs for w in pr}))
        qa = sum(1 for h in st.Q if st.side[h[0]] == st.side[h[1]] == 0)
        qb = sum(1 for h in st.Q if st.side[h[0]] == st.side[h[1]] == 1)
        st.check("case1-e(Q[A])=e(Q[B])", qa, "==", qb)
    q1 = sum(1 for h in st.added if st.v1 in h[:2] and all(st.side[w] == 1 for w in h[:2]))
    st.params.q1 = q1
    if table is not None:
        st.check("q1-table", q1, "==", table)
    else:
        st.check("q1-at-most-1", q1, "<=", 1)
    st.check("Q-degree-v1", st.q_degree(st.v1), "<=", D + 1)
    st._boundary("cstep2", vertices=sorted(st.V1))
    return st


def _select_m1(st: PipelineState, k: int) -> list:
    internal, crossing_M, crossing_Ex, outside = [], [], [], []
    for h in sorted(st.special):
        if h in st.Q and st.is_internal(h):
            internal.append(h)
        elif h in st.Q and h in st.M:
            crossing_M.append(h)
        elif h in st.Q:
            crossing_Ex.append(h)
        else:
            outside.append(h)
    st.check("M1-mandatory-fits", len(internal), "<=", k)
    avail = internal + crossing_M + crossing_Ex + outside
    if len(avail) < k:
        raise ConstructionError("cstep3", f"only {len(avail)} edges of M ∪ E(x) for k={k}")
    return avail[:max(k, len(internal))]


def cstep3_select_m1(state: PipelineState) -> PipelineState:
    """Choose the k rainbow edges M1 and form Q_AB = Q[A] ∪ Q[B] ∪ M1."""
    st = state
    st.step = "cstep3"
    internal = {h for h in st.Q if st.is_internal(h)}
    k = st.params.k_asymptotic
    if not st.strict:
        # smallest palette Δ(Q_AB) + slack; slack 4 is what the rainbow extension guarantees,
        # smaller values are attempted first and may fail in kstep1
        slack = st.k_slack
        base = Multigraph.from_handles(st.n + 1, internal)
        k = base.max_degree() + slack
        for _ in range(4):
            M1 = _select_m1(st, k)
            qab = Multigraph.from_handles(st.n + 1, internal | set(M1))
            if qab.max_degree() + slack <= k and len(M1) == k:
                break
            k = max(qab.max_degree() + slack, len(M1))
    M1 = _select_m1(st, k)
    k = len(M1)
    st.params.k = k
    st.M1 = set(M1)
    st.QAB = internal | st.M1
    st.S0 = frozenset({st.x}) if (not st.x_in_Q and any(st.x in h[:2] for h in st.M1)) else frozenset()
    st.check("M1-size", len(st.M1), "==", k)
    st.check("M1-in-special", len(st.M1 - st.special), "==", 0)
    st._boundary("cstep3", vertices=sorted(st.V1))
    return st


# ---------------------------------------------------------------------------
# coloring phase


def _precolor_J(qab: Multigraph, J: set, M1: list) -> dict:
    pre = {h: i + 1 for i, h in enumerate(M1)}
    used: dict[int, set] = {}
    for h, col in pre.items():
        for w in h[:2]:
            used.setdefault(w, set()).add(col)
    for h in sorted(J - set(M1)):
        col = 1
        while col in used.get(h[0], ()) or col in used.get(h[1], ()):
            col += 1
        pre[h] = col
        for w in h[:2]:
            used.setdefault(w, set()).add(col)
    return pre


def _missing_k(st: PipelineState, v: int, k: int) -> int:
    return (((1 << (k + 1)) - 1) ^ 1) & ~st.c.used_mask(v)


def _budget(st: PipelineState, v: int):
    """How many colors of 1..k+ℓ vertex v may miss without breaking the final step."""
    if v == st.x:
        return INF
    slack = st.prof.Delta - st.g.degree(v)
    return slack + (1 if st.side.get(v) == 1 else 0) - st.added_at(v)


def kstep1_color_qab(state: PipelineState) -> PipelineState:
    """k-edge-color Q_AB with M1 rainbow, then balance the color classes."""
    st = state
    st.step = "kstep1"
    p, n, k = st.params, st.n, st.params.k
    D = st.prof.Delta
    qab = Multigraph.from_handles(n + 1, st.QAB)
    st.check("k>=Delta(QAB)+4", k, ">=", qab.max_degree() + 4)
    # degree bounds on Q_AB
    t23 = n ** (2 / 3)
    xin = float(p.xi * n)
    for v in sorted(st.V1):
        d = qab.degree(v)
        if v == st.v1 and (p.case == "case1" or st.x_in_Q):
            w = 1.1 * xin if p.case == "case1" else t23
            st.check("Q-degree-v1-lower", d, ">=", D / 2 - w)
            st.check("Q-degree-v1-upper", d, "<=", D / 2 + w)
        elif v == st.x:
            continue
        elif v not in st.U:
            st.check("Q-degree-nonU-lower", d, ">=", D / 2 - 1.1 * xin)
            st.check("Q-degree-nonU-upper", d, "<=", D / 2 + t23)
        else:
            st.check("Q-degree-U-lower", d, ">=", st.prof.delta / 2 - t23)
            st.check("Q-degree-U-upper", d, "<=", D / 2 + t23)
    M1 = sorted(st.M1)
    d1 = st.d_G1(st.v1)
    if (p.case == "case1" and d1 < D - 2 * p.xi * n) or (p.case == "case2" and st.x_in_Q):
        J = {h for h in st.QAB if st.v1 in h[:2] and all(st.side.get(w) == 1 for w in h[:2])} | st.M1
    elif p.case == "case1":
        J = {h for h in st.QAB if h[2] > 0} | st.M1
    else:
        J = set(st.M1)
    # parallel copies must be precolored so that Q_AB − J is simple
    J |= {h for h in st.QAB if h[2] > 0}
    x_center = st.x if any(st.x in h[:2] for h in st.QAB) else None
    if x_center is not None:
        J |= {h for h in st.QAB if st.x in h[:2]}
    pre = _precolor_J(qab, J, M1)
    if max(pre.values(), default=0) > k:
        raise ConstructionError("kstep1", f"precoloring of J needs {max(pre.values())} > k={k} colors")
    if k >= qab.max_degree() + 4:
        try:
            cq = extend_rainbow_coloring_a(qab, J, st.M1, pre, k, x=x_center)
        except PreconditionError as exc:
            raise ConstructionError("kstep1", f"coloring of Q_AB: {exc}") from exc
    else:
        # tighter palette than the extension guarantees: same engine, bounded random restarts
        cq = PartialEdgeColoring.from_assignment(qab, k, pre)
        extend_coloring(cq, J, st.M1, heuristic=True, seed=st.seed, cap=4 * n)
        if not cq.is_total() or len({cq.color_of(h) for h in st.M1}) != len(st.M1):
            raise ConstructionError("kstep1", "tight coloring of Q_AB failed")
    if st.trace is not None:
        cq.trace = st.trace
    equalize_with_rainbow(cq, k, st.M1)
    st.c = PartialEdgeColoring(st.host, D + 2)
    st.c.trace = st.trace
    st._adopt(cq)
    # U* merges (case 2): join same-side low-degree vertices sharing a missing color
    if p.case == "case2":
        st.Ustar = frozenset(u for u in st.V1 if D - st.q_degree(u) >= 3.5 * t23)
        merged = False
        for s in (0, 1):
            group = sorted(u for u in st.Ustar if st.side[u] == s)
            progress = True
            while progress:
                progress = False
                for a_i, u in enumerate(group):
                    for v in group[a_i + 1:]:
                        common = _missing_k(st, u, k) & _missing_k(st, v, k)
                        if not common:
                            continue
                        if not st.strict and min(_budget(st, u), _budget(st, v)) < 1:
                            continue
                        h = st.add_q_edge(u, v)
                        st.QAB.add(h)
                        cq.graph.add_handle(h)
                        col = (common & -common).bit_length() - 1
                        cq.assign(h, col)
                        st.c.assign(h, col)
                        merged = progress = True
        if merged:
            equalize_with_rainbow(cq, k, st.M1)
            st.c = PartialEdgeColoring(st.host, D + 2)
            st.c.trace = st.trace
            st._adopt(cq)
        for u in sorted(st.Ustar):
            if u != st.x:
                st.check("reserve-Ustar-degree", st.q_degree(u), "<=", D - 0.2 * t23)
        for u in sorted(st.U):
            st.check("reserve-U-degree", st.q_degree(u), "<=", D - 0.4 * xin)
    VQAB = sorted(st.V1 | st.S0)
    st.phi0 = {v: bin(_missing_k(st, v, k)).count("1") for v in VQAB}
    per_color = [st.c.missing_count(i, VQAB) for i in range(1, k + 1)]
    st.check("missing-spread", max(per_color) - min(per_color), "<=", 5)
    if p.case == "case1":
        st.check("per-color-missing", max(per_color), "<", 12 * xin)
        st.W = frozenset(st.U & st.V1)
    else:
        st.check("case2-per-color-missing", max(per_color), "<", 14 * t23)
        st.W = frozenset(w for w in st.U if st.phi0.get(w, 0) >= 3.4 * t23)
        st.check("W-size", len(st.W), "<", n ** (1 / 3))
    st.budget = {v: _budget(st, v) for v in st.V1}
    st._boundary("kstep1", vertices=VQAB)
    return st


def _adopt(self: PipelineState, cq: PartialEdgeColoring) -> None:
    for h, col in sorted(cq.assignment.items()):
        self.c.assign(h, col)


PipelineState._adopt = _adopt


def _flexible(st: PipelineState, v: int, used: dict) -> bool:
    """Whether v may stay missing one more color."""
    if v == st.x:
        return True
    if st.strict:
        return st.case == "case2" and v in st.U and v not in st.W
    return st.budget[v] - used.get(v, 0) > 0


def _v1_fixup(st: PipelineState, k: int) -> None:
    """n odd: give x every color 1..k through its crossing E(x) edges, moving M1 accordingly."""
    x = st.x
    elig_all = sum(1 << v for v in st.V1) & ~sum(1 << w for w in st.W) & ~(1 << x)
    for i in sorted(iter_bits(_missing_k(st, x, k))):
        eh = st.e_i(i)
        elig = elig_all
        if eh is not None:
            elig &= ~((1 << eh[0]) | (1 << eh[1]))
        via = 0
        for h in st.host.edges_at(x):
            w = other_end(h, x)
            if h in st.Ex and not st.c.is_colored(h) and st.side.get(w) == 0:
                via |= 1 << w
        opts = st.two_step(x, i, elig, st.params.r - 1, eh, via=via)
        st.check("N1-v1", len(opts), ">=", 0.1 * float(st.params.eps) * st.n)
        if not opts:
            st.warn(f"x cannot receive color {i}")
            continue
        w2 = min(opts)
        w1, h = opts[w2]
        st._uncolor_internal(h)
        st.c.assign(handle(x, w1), i)
        if eh is not None:
            st.c.unassign(eh)
            st.M1.discard(eh)
            if st.is_internal(eh):
                st.R.add(eh)
                for w in eh[:2]:
                    st.rdeg[w] = st.rdeg.get(w, 0) + 1
        st.M1.add(handle(x, w1))
        st.stats["v1_swaps"] += 1
        if st.trace is not None:
            st.trace.append({"op": "v1-swap", "color": i, "path": [x, w1, w2], "released": list(eh) if eh else None})
        st._check_R()


def _w_transfer(st: PipelineState, k: int) -> None:
    """Move each missing color of a W vertex to a vertex outside W (path a–b1–b2)."""
    base = sum(1 << v for v in st.V1) & ~sum(1 << w for w in st.W) & ~(1 << st.x)
    for a in sorted(st.W):
        if a == st.x:
            continue
        for i in sorted(iter_bits(_missing_k(st, a, k))):
            eh = st.e_i(i)
            elig = base & ~(1 << a)
            if eh is not None:
                elig &= ~((1 << eh[0]) | (1 << eh[1]))
            opts = st.two_step(a, i, elig, st.params.r - 1, eh)
            st.check("N1-W", len(opts), ">=", 0.5 * float(st.params.eps) * st.n)
            if not opts:
                st.warn(f"W vertex {a} keeps missing color {i}")
                continue
            b2 = min(opts)
            b1, h = opts[b2]
            st._uncolor_internal(h)
            st._color_crossing(a, b1, i)
            st.stats["w_transfers"] += 1
            if st.trace is not None:
                st.trace.append({"op": "w-transfer", "color": i, "path": [a, b1, b2], "R_add": [list(h)]})
            st._check_R()


def _pair_up(vs_A: list, vs_B: list, i: int) -> list:
    out = []
    for a, b in zip(vs_A, vs_B):
        out.append(MccPair(i, a, b, "crossing"))
    rest = vs_A[len(vs_B):] if len(vs_A) > len(vs_B) else vs_B[len(vs_A):]
    for j in range(0, len(rest) - 1, 2):
        out.append(MccPair(i, rest[j], rest[j + 1], "same-side"))
    return out


def kstep2_extend_classes(state: PipelineState) -> PipelineState:
    """Grow classes 1..k along alternating paths until the target vertices see every color."""
    st = state
    st.step = "kstep2"
    p, k = st.params, st.params.k
    st._build_unc()
    st.rdeg = {}
    st.R = set()
    if st.x_in_Q:
        _v1_fixup(st, k)
    _w_transfer(st, k)
    leftover: dict[int, int] = {}
    vmask = sum(1 << v for v in st.V1)
    wmask = sum(1 << w for w in st.W)
    for i in range(1, k + 1):
        missing = [v for v in sorted(st.V1) if v != st.x and not (st.c.used_mask(v) >> i) & 1]
        if len(missing) % 2:
            flex = [v for v in missing if _flexible(st, v, leftover)]
            if flex:
                out = max(flex, key=lambda v: (st.budget[v] - leftover.get(v, 0), -v))
                missing.remove(out)
            else:
                out = _parity_kempe(st, i, k, leftover)
                if out is None:
                    st.warn(f"odd number of target vertices miss color {i}")
                    out = missing.pop()
                else:
                    missing = [v for v in sorted(st.V1) if v != st.x and not (st.c.used_mask(v) >> i) & 1]
                    missing.remove(out)
        eh = st.e_i(i)
        elig = vmask & ~wmask & ~(1 << st.x)
        if eh is not None:
            elig &= ~((1 << eh[0]) | (1 << eh[1]))
        todo = _pair_up([v for v in missing if st.side[v] == 0], [v for v in missing if st.side[v] == 1], i)
        failed = []
        for pair in todo:
            st.mcc_pairs.append(pair)
            for v in (pair.a, pair.b):
                if v in st.W:
                    continue
                n1 = st.two_step(v, i, elig & ~(1 << pair.a) & ~(1 << pair.b), p.r - 1, eh)
                st.check("N1-size", len(n1), ">", 0.25 * (1 + 0.5 * float(p.eps)) * st.n)
            path = st.find_path(pair.a, pair.b, i, elig, p.r - 1, eh)
            if path is None and not st.strict:
                path = st.find_path(pair.a, pair.b, i, elig, INF, eh)
                if path is not None:
                    st.stats["relaxed_good"] += 1
            if path is None:
                failed.extend((pair.a, pair.b))
                continue
            st.apply_path(path, i)
        if failed:
            # one more round with the failed vertices paired differently
            fa = [v for v in failed if st.side[v] == 0]
            fb = [v for v in failed if st.side[v] == 1]
            retry = _pair_up(fa, fb[::-1], i) if len(fb) > 1 else _pair_up(fa[::-1], fb, i)
            for pair in retry:
                path = st.find_path(pair.a, pair.b, i, elig, INF if not st.strict else p.r - 1, eh)
                if path is not None:
                    st.apply_path(path, i)
        for v in sorted(st.V1):
            if v != st.x and not (st.c.used_mask(v) >> i) & 1:
                if not _flexible(st, v, leftover):
                    st.stats["unpaired"] += 1
                    st.warn(f"target vertex {v} still misses color {i}")
                leftover[v] = leftover.get(v, 0) + 1
        st.check("parity-color", (st.c.missing_count(i, sorted(st.V1 | st.S0)) - len(st.V1 | st.S0)) % 2, "==", 0)
    # budgets for newly colored crossing edges
    for v in sorted(st.V1):
        if v == st.x:
            continue
        cnt = sum(1 for h in st.c._at[v].values() if st.is_crossing(h) and h not in st.QAB)
        bound = st.phi0.get(v, 0) + (0 if v in st.W else p.r)
        st.check("crossing-colored-budget", cnt, "<=", bound)
    if p.case == "case1":
        st.check("R-sides-equal", st.r_size(0), "==", st.r_size(1))
    st.leftover = leftover
    st._boundary("kstep2")
    return st


def _parity_kempe(st: PipelineState, i: int, k: int, leftover: dict):
    """Move the odd vertex missing i onto a flexible vertex by an (i, j) switch at it."""
    J0 = frozenset(st.M1)
    for u in sorted(st.V1, key=lambda v: (-(st.budget.get(v, 0) - leftover.get(v, 0)), v)):
        if u == st.x or not _flexible(st, u, leftover) or not (st.c.used_mask(u) >> i) & 1:
            continue
        for j in sorted(iter_bits(_missing_k(st, u, k))):
            if j <= i:
                continue
            pth = kempe_chain(st.c, u, i, j)
            if not pth.edges or not _rainbow_safe(st.c, pth, J0)[0]:
                continue
            kempe_switch(st.c, pth)
            st.stats["parity_kempe"] += 1
            return u
    return None


def _cover_matching(left: list, right: list, adj: dict, required: set) -> dict:
    """Bipartite matching covering every required vertex when alternating swaps allow it."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * (len(left) + len(right)) + 100))
    mate_l = hopcroft_karp(left, lambda u: adj.get(u, ()))
    mate_r = {w: u for u, w in mate_l.items()}
    radj: dict[int, list] = {}
    for u in left:
        for w in adj.get(u, ()):
            radj.setdefault(w, []).append(u)

    for r in sorted(v for v in left if v in required and v not in mate_l):
        _swap_in(r, mate_l, mate_r, lambda u: adj.get(u, ()), required)
    for r in sorted(v for v in right if v in required and v not in mate_r):
        _swap_in(r, mate_r, mate_l, lambda w: radj.get(w, ()), required)
    return mate_l


def _swap_in(r, mine: dict, theirs: dict, nb, required: set) -> bool:
    """Alternating search from uncovered r (on the 'mine' side).

    Ends either at an uncovered vertex of the other side (augment) or at an
    optional covered vertex on r's side, which is released.
    """
    parent = {r: None}  # vertex on r's side -> (previous same-side vertex, other-side vertex between)
    order = [r]
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for w in nb(u):
            if mine.get(u) == w:
                continue
            m = theirs.get(w)
            if m is None:
                _flip(u, w, parent, mine, theirs)
                return True
            if m in parent:
                continue
            parent[m] = (u, w)
            if m not in required:
                del mine[m]
                del theirs[w]
                _flip(u, w, parent, mine, theirs)
                return True
            order.append(m)
    return False


def _flip(u, w, parent, mine, theirs) -> None:
    # u takes w; the partner u reached through passes to u's parent, and so on back to the root
    while True:
        mine[u] = w
        theirs[w] = u
        if parent[u] is None:
            return
        u, w = parent[u]


def kstep3_new_classes(state: PipelineState) -> PipelineState:
    """Color R_A ∪ R_B with ℓ new colors and extend each new class across (A, B)."""
    st = state
    st.step = "kstep3"
    p, k = st.params, st.params.k
    D = st.prof.Delta
    R_special = sorted(h for h in st.R if h in st.special)
    p.p = len(R_special)
    eRA, eRB = st.r_size(0), st.r_size(1)
    st.check("kstep3-e(R_A)>=2p", eRA, ">=", 2 * p.p)
    st.check("kstep3-e(R_B)>=2p", eRB, ">=", 2 * p.p)
    rest = sorted(h for h in st.R if h not in st.special)
    by_side = {0: [h for h in rest if st.side[h[0]] == 0], 1: [h for h in rest if st.side[h[0]] == 1]}
    # ℓ − p colors for R_A ∪ R_B
    sub = {s: Multigraph.from_handles(st.n + 1, by_side[s]) for s in (0, 1)}
    need = 0
    for s in (0, 1):
        mg = sub[s]
        if mg.m:
            need = max(need, mg.max_degree() + (1 if mg.mu() <= 1 else mg.mu()))
    if st.strict:
        ell = 2 * p.r + p.p
        p.ell_asymptotic = ell
        st.check("kstep3-ell-p>=Delta(R)+mu(R)", ell - p.p, ">=", need)
    else:
        p.ell_asymptotic = 2 * p.r + p.p
        ell = p.p + need
    p.ell = ell
    st.check("palette-k+ell<=Delta+2", k + ell, "<=", D + 2)
    if k + ell > D + 2:
        if st.strict:
            raise ConstructionError("kstep3", f"k+ℓ={k + ell} exceeds Δ+2={D + 2}")
        st.warnings.append(f"kstep3: k+ℓ={k + ell} exceeds Δ+2={D + 2}; new classes skipped")
        st.overflow = True
        st._boundary("kstep3", vertices=range(st.n + 1))
        return st
    st.c.check()
    leftover = {v: bin(_missing_k(st, v, k)).count("1") for v in st.V1 if v != st.x}
    rem = {v: st.budget[v] - leftover[v] for v in leftover}
    classes: dict[int, list] = {}
    # colors k+1..k+p: one released M edge plus one ordinary R edge from the other side
    used_f = set()
    for j, e in enumerate(R_special):
        col = k + 1 + j
        other = 1 - st.side[e[0]]
        f = next((h for h in by_side[other] if h not in used_f), None)
        if f is None:
            raise ConstructionError("kstep3", "no partner edge for a released M edge")
        used_f.add(f)
        classes[col] = [e, f]
    # the rest of R with ℓ − p colors, each side separately, aligned by class size
    q = ell - p.p
    if q:
        per_side = {}
        for s in (0, 1):
            edges = [h for h in by_side[s] if h not in used_f]
            mg = Multigraph.from_handles(st.n + 1, edges)
            if not edges:
                per_side[s] = [[] for _ in range(q)]
                continue
            cs = vizing_color(mg, q)
            equalize(cs, q)
            groups = [cs.class_edges(c) for c in range(1, q + 1)]
            groups.sort(key=lambda es: (-len(es), es))
            per_side[s] = groups
        for j in range(q):
            classes[k + p.p + 1 + j] = per_side[0][j] + per_side[1][j]
    for col in sorted(classes):
        for h in classes[col]:
            st.c.assign(h, col)
            st.R.discard(h)
    st.rdeg = {}
    # extend every new class across (A, B)
    for col in range(k + 1, k + ell + 1):
        has_special = any(h in st.special for h in classes.get(col, ()))
        covered = {w for h in classes.get(col, ()) for w in h[:2]}
        if (p.case == "case2" or not st.strict) and not has_special and not (st.c.used_mask(st.x) >> col) & 1:
            cand = [h for h in sorted(st.Ex) if not st.c.is_colored(h) and other_end(h, st.x) not in covered]
            if cand:
                order = sorted(cand, key=lambda h: (rem.get(other_end(h, st.x), 0) > 0, h))
                h = order[0]
                st.c.assign(h, col)
                st.M2.add(h)
                has_special = True
                covered |= set(h[:2])
        if not st.strict and not has_special:
            # best effort: also route one uncolored crossing M edge, so that the
            # last step has fewer rainbow edges to place
            cand = [h for h in sorted(st.M) if not st.c.is_colored(h) and st.is_crossing(h)
                    and not covered & set(h[:2])]
            if cand:
                h = min(cand, key=lambda h: (rem.get(h[0], 0) + rem.get(h[1], 0), h))
                st.c.assign(h, col)
                st.M2.add(h)
                has_special = True
                covered |= set(h[:2])
        left = sorted(v for v in st.A if v not in covered)
        right = sorted(v for v in st.B if v not in covered)
        adj = {}
        for u in left:
            nb = [w for w in iter_bits(st.unc[u]) if w not in covered]
            adj[u] = nb
        if st.x_in_Q and st.x not in covered and not has_special:
            for h in st.host.edges_at(st.x):
                w = other_end(h, st.x)
                if h in st.Ex and not st.c.is_colored(h) and w in adj:
                    adj[w] = adj[w] + [st.x]
        if st.strict:
            required = set(left) | set(right)
            if p.case == "case2":
                gap = len(left) - len(right)
                pool = sorted((set(right) if gap < 0 else set(left)) & st.U)
                C = pool[:abs(gap)]
                st.check("kstep3-C_i-size", len(C), "==", abs(gap))
                required -= set(C)
            required.discard(st.x)
        else:
            required = {v for v in left + right if v != st.x and rem.get(v, 0) <= 0}
        mate = _cover_matching(left, right, adj, required)
        for u, w in sorted(mate.items()):
            h = handle(u, w)
            st.c.assign(h, col)
            if h in st.special:
                st.M2.add(h)
            else:
                st.unc[u] &= ~(1 << w)
                st.unc[w] &= ~(1 << u)
        st.stats["H_matched"] += len(mate)
        matched = set(mate) | set(mate.values())
        for v in left + right:
            if v == st.x or v in matched:
                continue
            rem[v] = rem.get(v, 0) - 1
            if v in required:
                st.warn(f"vertex {v} not covered by new color {col}")
    st.rem = rem
    st._boundary("kstep3", vertices=range(st.n + 1))
    return st


def kstep4_finish(state: PipelineState) -> PartialEdgeColoring:
    """Color what is left with Δ+2−k−ℓ fresh colors and return the good coloring of G^M."""
    st = state
    st.step = "kstep4"
    p = st.params
    D = st.prof.Delta
    if st.overflow:
        final = _repair_finish(st)
        st.stats["repaired"] = sum(1 for h in st.gm_edges if not st.c.is_colored(h))
        return _finalize(st, final)
    base = p.k + p.ell
    cR = D + 2 - base
    left_internal = [h for h in st.Q if st.is_internal(h) and not st.c.is_colored(h)]
    if left_internal:
        raise ConstructionError("kstep4", f"{len(left_internal)} edges inside A or B are still uncolored")
    R_edges = sorted(h for h in st.gm_edges if not st.c.is_colored(h))
    Rg = Multigraph.from_handles(st.n + 1, R_edges)
    J = [h for h in R_edges if h in st.special]
    st.check("step4-d_R(x)", Rg.degree(st.x), "<=", cR)
    st.check("step4-|J|<=c", len(J), "<=", cR)
    st.check("step4-Delta(R)<=c", Rg.max_degree(), "<=", cR)
    for v in sorted(st.A):
        st.check("step4-A-degree<c", Rg.degree(v), "<", cR)
    pre = {h: j + 1 for j, h in enumerate(sorted(J))}
    X = sorted(v for v in st.A if v != st.x)
    Y = sorted(v for v in range(st.n + 1) if v != st.x and v not in st.A)
    attempts = [(X, Y)]
    if not st.strict:
        attempts.append((Y, X))
    last = None
    for sides in attempts:
        try:
            cr = extend_rainbow_coloring_b(Rg, J, J, pre, cR, sides, st.x)
            break
        except PreconditionError as exc:
            last = f"bipartite extension precondition {exc.clause}: {exc.detail}"
        except ConstructionError as exc:
            last = f"bipartite extension: {exc.detail}"
    else:
        if st.strict:
            raise ConstructionError("kstep4", last)
        st.warnings.append(f"kstep4: {last}; repairing on the full palette")
        final = _repair_finish(st)
        st.stats["repaired"] = len(R_edges)
        cr = None
    if cr is not None:
        for h, col in sorted(cr.assignment.items()):
            st.c.assign(h, base + col)
        final = PartialEdgeColoring(st.ag.multigraph(), D + 2)
        for h, col in sorted(st.c.assignment.items()):
            if h in st.gm_edges:
                final.assign(h, col)
        st.M2 |= set(J)
    return _finalize(st, final)


def _finalize(st: PipelineState, final: PartialEdgeColoring) -> PartialEdgeColoring:
    verdict = validate_good(st.ag, final)
    if not verdict.ok:
        raise AssertionError(f"pipeline produced a coloring that is not good: {verdict.first}")
    st.step = "done"
    st.snapshot()
    return final


def _repair_finish(st: PipelineState) -> PartialEdgeColoring:
    """Best effort when the last step's preconditions fail: keep every color
    assigned so far, give each uncolored edge of M ∪ E(x) a color no other such
    edge has, and let the fan/Kempe engine color the rest with all Δ+2 colors."""
    D = st.prof.Delta
    final = PartialEdgeColoring(st.ag.multigraph(), D + 2)
    for h, col in sorted(st.c.assignment.items()):
        if h in st.gm_edges:
            final.assign(h, col)
    taken = {final.color_of(h) for h in st.special} - {None}
    for h in sorted(st.special):
        if final.is_colored(h):
            continue
        free = [col for col in range(1, D + 3) if col not in taken]
        if not free:
            raise ConstructionError("kstep4-repair", "no unused color left for an edge of M ∪ E(x)")
        # fewest conflicts at the endpoints; conflicting ordinary edges are uncolored
        col = min(free, key=lambda c: (sum(1 for w in h[:2] if final.edge_at(w, c) is not None), c))
        for w in h[:2]:
            other = final.edge_at(w, col)
            if other is not None:
                final.unassign(other)
        final.assign(h, col)
        taken.add(col)
    special = frozenset(st.special)
    try:
        extend_coloring(final, special, special, heuristic=True, seed=st.seed, cap=8 * st.n)
    except ConstructionError as exc:
        raise ConstructionError("kstep4-repair", exc.detail) from exc
    return final


def run_pipeline(g: Graph, M, case: str, eps, xi=None, *, strict: bool = False, seed: int = 0,
                 trace: bool = False) -> PipelineResult:
    """Run all seven steps.  Construction failures are returned, not raised."""
    from .reduction import default_xi

    eps = as_fraction(eps)
    xi = default_xi(eps) if xi is None else as_fraction(xi)
    st = PipelineState(g, M, case, eps, xi, strict=strict, seed=seed, trace=trace)
    try:
        cstep1_partition(st)
        cstep2_build_q(st)
        # best effort: try palettes Δ(Q_AB)+1 .. Δ(Q_AB)+4 for the first coloring step
        for slack in ((4,) if strict else (1, 2, 3, 4)):
            st.k_slack = slack
            cstep3_select_m1(st)
            try:
                kstep1_color_qab(st)
                break
            except ConstructionError as exc:
                if slack == 4:
                    raise
                st.warnings.append(f"kstep1: palette Δ(Q_AB)+{slack} failed ({exc.detail})")
        for step in (kstep2_extend_classes, kstep3_new_classes):
            step(st)
        final = kstep4_finish(st)
    except AssertionFailure as exc:
        return PipelineResult(False, None, st, {"stage": st.step, "kind": "assertion", "name": exc.name,
                                                 "lhs": exc.lhs, "relation": exc.relation, "rhs": exc.rhs})
    except ConstructionError as exc:
        return PipelineResult(False, None, st, {"stage": exc.stage, "kind": "construction", "detail": exc.detail})
    return PipelineResult(True, final, st)
