"""Multifans, shifts along linear sequences, and the fan/Kempe extension engine.

The engine colors uncolored edges one at a time.  For an uncolored edge at a
center vertex it grows the maximal multifan whose linear sequences avoid a
protected edge set J.  If the center and some fan vertex miss a common color,
it shifts along that vertex's linear sequence and colors the freed edge.
Otherwise it looks for a color gamma missing at two or more fan vertices and
an alternating (alpha, gamma) chain whose switch creates such a common color.
Chains are admitted only when they keep the precolored rainbow set J0 rainbow.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..errors import ConstructionError
from ..graph import Edge, iter_bits, other_end
from .partial import KempePath, PartialEdgeColoring, kempe_chain, kempe_switch, lowest_bit


@dataclass(frozen=True)
class Multifan:
    center: int
    edges: tuple  # e_0 .. e_p, all incident to the center; e_0 uncolored
    vertices: tuple  # s_0 .. s_p, s_i the far end of e_i
    parent: tuple  # parent[i] = j < i with color(e_i) missing at s_j; parent[0] = -1

    def __len__(self) -> int:
        return len(self.edges)

    def chain(self, i: int) -> list[int]:
        """Index chain of the linear sequence from e_0 to e_i."""
        out = [i]
        while self.parent[out[-1]] != -1:
            out.append(self.parent[out[-1]])
        return out[::-1]

    @property
    def linear_sequences(self) -> list[list[int]]:
        return [self.chain(i) for i in range(len(self.edges))]


def build_multifan(c: PartialEdgeColoring, r: int, e0: Edge, forbidden: Iterable = frozenset(),
                   *, stop_on_common: bool = False) -> Multifan:
    """Maximal multifan at ``r`` started by the uncolored edge ``e0``.

    Breadth-first over fan positions; at each position the missing colors are
    scanned in increasing order, so the result is deterministic.  Edges in
    ``forbidden`` never enter the fan, and each far vertex appears once.  With
    ``stop_on_common`` growth stops at the first vertex sharing a missing
    color with the center (the fan is then a prefix of the maximal one).
    """
    if c.is_colored(e0) or r not in e0[:2]:
        raise ValueError("e0 must be an uncolored edge at the center")
    forbidden = forbidden if isinstance(forbidden, (set, frozenset)) else set(forbidden)
    at_r = c._at[r]
    used_r = c.used_mask(r)
    miss_r = c.missing_mask(r)
    edges = [e0]
    verts = [other_end(e0, r)]
    parent = [-1]
    seen = {verts[0], r}
    i = 0
    while i < len(edges):
        ms = c.missing_mask(verts[i])
        if stop_on_common and ms & miss_r:
            break
        for col in iter_bits(ms & used_r):
            h = at_r[col]
            if h in forbidden:
                continue
            w = h[1] if h[0] == r else h[0]
            if w in seen:
                continue
            seen.add(w)
            edges.append(h)
            verts.append(w)
            parent.append(i)
        i += 1
    return Multifan(r, tuple(edges), tuple(verts), tuple(parent))


def is_linear_sequence(c: PartialEdgeColoring, f: Multifan, chain: list[int]) -> bool:
    if not chain or chain[0] != 0 or c.is_colored(f.edges[0]):
        return False
    for a, b in zip(chain, chain[1:]):
        col = c.color_of(f.edges[b])
        if col is None or not (c.missing_mask(f.vertices[a]) >> col) & 1:
            return False
    return len(set(chain)) == len(chain)


def shift(c: PartialEdgeColoring, f: Multifan, chain: list[int], h: int) -> PartialEdgeColoring:
    """Recolor e_{l_{i-1}} with the color of e_{l_i} for i = 1..h, in place.

    Afterwards e_0 is colored and e_{l_h} is the uncolored edge.
    """
    if not is_linear_sequence(c, f, chain):
        raise ValueError("chain is not a linear sequence of the fan")
    if not 0 <= h < len(chain):
        raise ValueError(f"shift index {h} outside 0..{len(chain) - 1}")
    if h == 0:
        return c
    idx = chain[: h + 1]
    cols = [c.unassign(f.edges[j]) for j in idx[1:]]
    for j, col in zip(idx[:-1], cols):
        c.assign(f.edges[j], col)
    c._log({"op": "shift", "center": f.center, "vertices": [f.vertices[j] for j in idx]})
    return c


@dataclass
class ExtensionStats:
    colored: int = 0
    switches: int = 0
    probes: int = 0
    center_swaps: int = 0
    random_kicks: int = 0
    cap: int = 0
    log: list = field(default_factory=list)


def _rainbow_safe(c: PartialEdgeColoring, p: KempePath, J0: frozenset) -> tuple[bool, bool]:
    """(safe, touches) for switching ``p`` with respect to the rainbow set J0.

    The switch keeps J0 rainbow iff the J0 edges colored alpha or gamma lie all
    on the chain or all off it.
    """
    if not J0:
        return True, False
    hit = [h for col in (p.alpha, p.gamma) for h in _j0_edges_with_color(c, J0, col)]
    if not hit:
        return True, False
    pe = set(p.edges)
    on = sum(1 for h in hit if h in pe)
    return on == 0 or on == len(hit), on > 0


def _j0_edges_with_color(c, J0, col):
    out = []
    # each color appears on at most one J0 edge; edges carrying col are few (≤ n/2)
    for h in J0:
        if c.color_of(h) == col:
            out.append(h)
    return out


def _try_augment(c: PartialEdgeColoring, f: Multifan) -> bool:
    mu = c.missing_mask(f.center)
    for i, s in enumerate(f.vertices):
        common = mu & c.missing_mask(s)
        if common:
            col = lowest_bit(common)
            chain = f.chain(i)
            shift(c, f, chain, len(chain) - 1)
            last = f.edges[chain[-1]]
            if not ((c.missing_mask(last[0]) & c.missing_mask(last[1])) >> col) & 1:
                raise AssertionError("freed edge endpoints do not share the augmenting color")
            c.assign(last, col)
            return True
    return False


def _switch_candidates(c: PartialEdgeColoring, f: Multifan, min_shared: int):
    mu = c.missing_mask(f.center)
    if not mu:
        return
    alpha = lowest_bit(mu)
    for gamma in range(1, c.k + 1):
        if gamma == alpha:
            continue
        ys = [s for s in f.vertices if (c.missing_mask(s) >> gamma) & 1]
        if len(ys) < min_shared:
            continue
        for y in ys:
            yield alpha, gamma, y
        yield alpha, gamma, f.center


def _color_edge(c, e0, center, J, J0, stats: ExtensionStats, min_shared: int) -> bool:
    if _try_augment(c, build_multifan(c, center, e0, J, stop_on_common=True)):
        return True
    f = build_multifan(c, center, e0, J)
    # stuck state: no fan vertex shares a missing color with the center
    mu = c.missing_mask(center)
    for s in f.vertices:
        if mu & c.missing_mask(s):
            raise AssertionError("fan vertex shares a missing color with the center before switching")
    tried = set()
    for alpha, gamma, y in _switch_candidates(c, f, min_shared):
        p = kempe_chain(c, y, alpha, gamma)
        key = (alpha, gamma, p.edges and min(p.edges))
        if key in tried or not p.edges:
            continue
        tried.add(key)
        if y != center and center in p.vertices:
            continue
        safe, touches = _rainbow_safe(c, p, J0)
        if not safe:
            continue
        stats.probes += 1
        kempe_switch(c, p)
        f2 = build_multifan(c, center, e0, J, stop_on_common=True)
        if _try_augment(c, f2):
            stats.switches += 1
            return True
        kempe_switch(c, kempe_chain(c, p.vertices[0], alpha, gamma))
    return False


def _random_kick(c: PartialEdgeColoring, e0: Edge, J0, rng: random.Random) -> bool:
    verts = list(e0[:2])
    for _ in range(20):
        v = rng.choice(verts)
        a, b = rng.sample(range(1, c.k + 1), 2)
        p = kempe_chain(c, v, a, b)
        if not p.edges or _rainbow_safe(c, p, J0)[0] is False:
            continue
        kempe_switch(c, p)
        return True
    return False


def extend_coloring(
    c: PartialEdgeColoring,
    J: Iterable = frozenset(),
    J0: Iterable = frozenset(),
    *,
    center_of: Callable[[Edge], int] | None = None,
    min_shared: int = 2,
    cap: int | None = None,
    heuristic: bool = False,
    seed: int = 0,
    order: Iterable[Edge] | None = None,
) -> ExtensionStats:
    """Color every uncolored edge of ``c`` in place, never uncoloring anything.

    ``J`` edges are never put into fans (they keep their colors except through
    admitted Kempe switches); ``J0`` ⊆ J stays rainbow.  Without ``heuristic``
    a stalled edge raises :class:`ConstructionError`.  With it, the engine
    retries from the other endpoint and then applies random rainbow-safe
    Kempe switches, until ``cap`` committed switches are spent.
    """
    J = frozenset(J)
    J0 = frozenset(J0)
    if not J0 <= J:
        raise ValueError("J0 must be contained in J")
    n = c.graph.n
    cap = cap if cap is not None else max(1, n * c.k)
    stats = ExtensionStats(cap=cap)
    rng = random.Random(seed)
    todo = list(order) if order is not None else c.uncolored_edges()
    for e0 in todo:
        if c.is_colored(e0):
            continue
        before = len(c.assignment)
        u = center_of(e0) if center_of else e0[0]
        ok = _color_edge(c, e0, u, J, J0, stats, min_shared)
        if not ok and heuristic:
            stats.center_swaps += 1
            ok = _color_edge(c, e0, other_end(e0, u), J, J0, stats, min_shared)
            while not ok and stats.switches + stats.random_kicks < cap:
                if not _random_kick(c, e0, J0, rng):
                    break
                stats.random_kicks += 1
                for center in (u, other_end(e0, u)):
                    ok = _color_edge(c, e0, center, J, J0, stats, min_shared)
                    if ok:
                        break
        if not ok:
            raise ConstructionError("extension", f"stalled on edge {e0} after {stats.switches} switches")
        if len(c.assignment) != before + 1:
            raise AssertionError("outer round did not color exactly one new edge")
        stats.colored += 1
        if stats.switches > cap:
            raise ConstructionError("extension-cap", f"{stats.switches} switches exceed cap {cap}")
    return stats
