"""Matchings, Hamilton cycles and spanning linking paths in dense graphs.

``max_matching`` is Edmonds' blossom algorithm.  After the matching is
maximum, one more search grown from every exposed vertex at once labels the
vertices even/odd; the odd vertices form a Tutte–Berge witness S, and the
formula is checked before returning.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConstructionError, PreconditionError
from .graph import Graph, as_fraction, handle, iter_bits, norm


@dataclass(frozen=True)
class MatchingResult:
    matching: frozenset  # of (u, v, 0) handles
    witness: frozenset

    @property
    def size(self) -> int:
        return len(self.matching)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted((h[0], h[1]) for h in self.matching)


class _Blossom:
    def __init__(self, n: int, adj: list[list[int]]):
        self.n = n
        self.adj = adj
        self.match = [-1] * n

    def _lca(self, a, b, p, base):
        seen = [False] * self.n
        while True:
            a = base[a]
            seen[a] = True
            if self.match[a] == -1:
                break
            a = p[self.match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            if self.match[b] == -1:
                return -1
            b = p[self.match[b]]

    def _mark(self, v, b, child, p, base, blossom):
        match = self.match
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def search(self, roots: Sequence[int]):
        """Alternating-forest search.  Returns (endpoint, p, even) where endpoint is an
        exposed odd vertex reached (single-root augmentation) or -1."""
        n, match, adj = self.n, self.match, self.adj
        even = [False] * n
        p = [-1] * n
        base = list(range(n))
        q = deque()
        for r in roots:
            even[r] = True
            q.append(r)
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if even[to]:
                    cur = self._lca(v, to, p, base)
                    if cur == -1:
                        raise AssertionError("two exposed trees joined: matching was not maximum")
                    blossom = [False] * n
                    self._mark(v, cur, to, p, base, blossom)
                    self._mark(to, cur, v, p, base, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not even[i]:
                                even[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        return to, p, even
                    even[match[to]] = True
                    q.append(match[to])
        return -1, p, even

    def run(self):
        match, adj = self.match, self.adj
        for v in range(self.n):
            if match[v] == -1:
                for u in adj[v]:
                    if match[u] == -1:
                        match[u], match[v] = v, u
                        break
        for r in range(self.n):
            if match[r] != -1:
                continue
            end, p, _ = self.search([r])
            v = end
            while v != -1:
                pv = p[v]
                nxt = match[pv]
                match[v], match[pv] = pv, v
                v = nxt
        exposed = [v for v in range(self.n) if match[v] == -1]
        _, p, even = self.search(exposed)
        odd = frozenset(v for v in range(self.n) if p[v] != -1 and not even[v])
        return odd


def _odd_components(n: int, adj: list[list[int]], removed: frozenset) -> int:
    seen = set(removed)
    odd = 0
    for s in range(n):
        if s in seen:
            continue
        seen.add(s)
        stack, size = [s], 0
        while stack:
            v = stack.pop()
            size += 1
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        odd += size & 1
    return odd


def _max_matching_adj(n: int, adj: list[list[int]]) -> MatchingResult:
    b = _Blossom(n, adj)
    S = b.run()
    pairs = {norm(v, b.match[v]) for v in range(n) if b.match[v] > v}
    size = len(pairs)
    bound = (n + len(S) - _odd_components(n, adj, S))
    if 2 * size != bound:
        raise AssertionError(f"Tutte-Berge check failed: 2|M|={2 * size}, bound={bound}")
    return MatchingResult(frozenset(handle(u, v) for u, v in pairs), S)


def max_matching(g) -> MatchingResult:
    """Maximum matching of a Graph or Multigraph with a Tutte–Berge witness."""
    adj = [g.neighbors(v) for v in range(g.n)]
    return _max_matching_adj(g.n, adj)


def complement_adjacency(g: Graph) -> list[list[int]]:
    """Neighbor lists of the complement read directly off the bitset rows."""
    full = (1 << g.n) - 1
    return [list(iter_bits(full & ~r & ~(1 << v))) for v, r in enumerate(g.rows)]


@dataclass(frozen=True)
class ComplementMatching:
    edges: tuple  # sorted (u, v) pairs
    shortfall: bool
    maximum: int
    witness: frozenset


def complement_matching(g: Graph, xi, target: int, check: bool = True) -> ComplementMatching:
    """A matching of the complement with ``target`` edges, or the maximum one flagged short.

    With ``check`` the dense-regime preconditions δ ≥ n/2 and Δ < 3n/4 are enforced.
    """
    n = g.n
    if target > n // 2 or target < 0:
        raise PreconditionError("target", f"target {target} outside 0..{n // 2}")
    if check and n:
        if 2 * g.min_degree() < n:
            raise PreconditionError("min-degree", f"δ={g.min_degree()} < n/2={n / 2}")
        if 4 * g.max_degree() >= 3 * n:
            raise PreconditionError("max-degree", f"Δ={g.max_degree()} ≥ 3n/4={3 * n / 4}")
    res = _max_matching_adj(n, complement_adjacency(g))
    pairs = res.pairs()
    if len(pairs) >= target:
        return ComplementMatching(tuple(pairs[:target]), False, len(pairs), res.witness)
    return ComplementMatching(tuple(pairs), True, len(pairs), res.witness)


def is_hamilton_cycle(g: Graph, cyc: Sequence[int]) -> bool:
    if len(cyc) != g.n or sorted(cyc) != list(range(g.n)) or g.n < 3:
        return False
    return all(g.has_edge(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n))


def dirac_hamilton_cycle(g: Graph, seed: int = 0) -> list[int]:
    """Hamilton cycle of a graph with n ≥ 3 and δ ≥ n/2.

    Extend a path greedily from both ends, close it into a cycle through a
    crossing pair of endpoint neighbours (rotation), and reopen the cycle at a
    vertex with an outside neighbour.  Each round strictly lengthens the path.
    """
    n = g.n
    if n < 3:
        raise PreconditionError("order", f"n={n} < 3")
    if 2 * g.min_degree() < n:
        raise PreconditionError("dirac", f"δ={g.min_degree()} < n/2={n / 2}")
    rows = g.rows
    rng = random.Random(seed)
    start = rng.randrange(n)
    path = [start]
    inpath = 1 << start
    while True:
        # extend at both ends
        grew = True
        while grew:
            grew = False
            for end in (-1, 0):
                free = rows[path[end]] & ~inpath
                if free:
                    w = (free & -free).bit_length() - 1
                    inpath |= 1 << w
                    if end == -1:
                        path.append(w)
                    else:
                        path.insert(0, w)
                    grew = True
        # close the path into a cycle
        a, b = path[0], path[-1]
        L = len(path)
        if rows[a] >> b & 1:
            cyc = path
        else:
            cyc = None
            for i in range(1, L - 1):
                if (rows[a] >> path[i + 1] & 1) and (rows[b] >> path[i] & 1):
                    cyc = path[: i + 1] + path[: i : -1]
                    break
            if cyc is None:
                raise ConstructionError("hamilton", "no crossing pair; Dirac condition must have failed")
        if L == n:
            if not is_hamilton_cycle(g, cyc):
                raise AssertionError("hamilton cycle validation failed")
            return cyc
        # open the cycle at a vertex with a neighbour outside it
        for i, v in enumerate(cyc):
            free = rows[v] & ~inpath
            if free:
                w = (free & -free).bit_length() - 1
                path = cyc[i + 1:] + cyc[: i + 1] + [w]
                inpath |= 1 << w
                break
        else:
            raise ConstructionError("hamilton", "graph is disconnected")


@dataclass(frozen=True)
class LinkingForest:
    paths: tuple  # tuple of vertex tuples; path i runs from a_i to b_i
    pairs: tuple

    def edges(self) -> list[tuple[int, int]]:
        return sorted(norm(p[j], p[j + 1]) for p in self.paths for j in range(len(p) - 1))


def validate_linking(g: Graph, pairs, paths) -> bool:
    seen = set()
    for (a, b), p in zip(pairs, paths):
        if not p or p[0] != a or p[-1] != b:
            return False
        for j in range(len(p) - 1):
            if not g.has_edge(p[j], p[j + 1]):
                return False
        for v in p:
            if v in seen:
                return False
            seen.add(v)
    return len(paths) == len(pairs) and seen == set(range(g.n))


def _bfs_path(g: Graph, a: int, b: int, blocked: int) -> list[int] | None:
    rows = g.rows
    prev = {a: -1}
    q = deque([a])
    allowed = ~blocked | (1 << b)
    while q:
        v = q.popleft()
        if v == b:
            out = []
            while v != -1:
                out.append(v)
                v = prev[v]
            return out[::-1]
        for w in iter_bits(rows[v] & allowed):
            if w not in prev:
                prev[w] = v
                q.append(w)
    return None


def _absorb(g: Graph, paths: list[list[int]], uncovered: list[int], rng: random.Random, budget: int) -> bool:
    rows = g.rows
    pending = deque(uncovered)
    stalls = 0
    while pending and budget > 0:
        budget -= 1
        v = pending.popleft()
        r = rows[v]
        done = False
        for p in paths:
            for j in range(len(p) - 1):
                if (r >> p[j] & 1) and (r >> p[j + 1] & 1):
                    p.insert(j + 1, v)
                    done = True
                    break
            if done:
                break
        if not done:
            # replace an interior vertex whose neighbours along the path are adjacent to v
            cands = []
            for pi, p in enumerate(paths):
                for j in range(1, len(p) - 1):
                    if (r >> p[j - 1] & 1) and (r >> p[j + 1] & 1):
                        cands.append((pi, j))
            if cands:
                pi, j = cands[rng.randrange(len(cands))]
                out = paths[pi][j]
                paths[pi][j] = v
                pending.append(out)
                done = True
        if done:
            stalls = 0
        else:
            pending.append(v)
            stalls += 1
            if stalls > len(pending):
                return False
    return not pending


def _linking_backtrack(g: Graph, pairs) -> list[list[int]] | None:
    n = g.n
    rows = g.rows
    ends = 0
    for a, b in pairs:
        ends |= (1 << a) | (1 << b)
    paths: list[list[int]] = []

    def grow(i: int, used: int) -> bool:
        if i == len(pairs):
            return used == (1 << n) - 1
        a, b = pairs[i]
        path = [a]

        def ext(v: int, used: int) -> bool:
            if v == b:
                paths.append(list(path))
                if grow(i + 1, used):
                    return True
                paths.pop()
                return False
            for w in iter_bits(rows[v] & ~used):
                if (ends >> w) & 1 and w != b:
                    continue
                path.append(w)
                if ext(w, used | (1 << w)):
                    return True
                path.pop()
            return False

        return ext(a, used | (1 << a))

    start = 0
    for a, b in pairs:
        start |= 1 << a
    # endpoints b_i are entered during the search, so only a_i are pre-marked
    return paths if grow(0, start) else None


def linking_paths(g: Graph, pairs, eps=None, *, seed: int = 0, restarts: int = 20,
                  check: bool = True) -> LinkingForest:
    """Vertex-disjoint paths joining each a_i to b_i and covering every vertex."""
    pairs = [tuple(map(int, p)) for p in pairs]
    if not pairs:
        raise PreconditionError("pairs", "at least one pair required")
    flat = [v for p in pairs for v in p]
    if len(set(flat)) != len(flat) or any(not 0 <= v < g.n for v in flat):
        raise PreconditionError("pairs", "pair endpoints must be distinct vertices")
    n = g.n
    if check and eps is not None:
        eps = as_fraction(eps)
        if g.min_degree() < (1 + eps) * n / 2:
            raise PreconditionError("min-degree", f"δ={g.min_degree()} < (1+ε)n/2={float((1 + eps) * n / 2):.3f}")
        if len(pairs) > eps * n / 8:
            raise PreconditionError("pair-count", f"{len(pairs)} pairs > εn/8={float(eps * n / 8):.3f}")
    ends = 0
    for v in flat:
        ends |= 1 << v
    for attempt in range(restarts):
        rng = random.Random(seed * 7919 + attempt)
        order = list(range(len(pairs)))
        if attempt:
            rng.shuffle(order)
        paths: list[list[int]] = [[] for _ in pairs]
        used = ends
        ok = True
        for i in order:
            a, b = pairs[i]
            p = _bfs_path(g, a, b, used & ~(1 << a))
            if p is None:
                ok = False
                break
            paths[i] = p
            for v in p:
                used |= 1 << v
        if not ok:
            continue
        uncovered = [v for v in range(n) if not (used >> v) & 1]
        rng.shuffle(uncovered)
        if _absorb(g, paths, uncovered, rng, budget=20 * n + 100):
            if validate_linking(g, pairs, paths):
                return LinkingForest(tuple(tuple(p) for p in paths), tuple(pairs))
    if n <= 12:
        res = _linking_backtrack(g, pairs)
        if res is not None and validate_linking(g, pairs, res):
            return LinkingForest(tuple(tuple(p) for p in res), tuple(pairs))
        raise ConstructionError("linking", "no spanning linkage exists")
    raise ConstructionError("linking", f"heuristic exhausted {restarts} restarts")


@dataclass(frozen=True)
class BipartiteMatchingResult:
    matching: frozenset | None
    hall_violator: frozenset | None

    @property
    def perfect(self) -> bool:
        return self.matching is not None


def hopcroft_karp(left: Sequence[int], nbrs: Callable[[int], Sequence[int]]) -> dict[int, int]:
    """Maximum bipartite matching; returns a left → right map."""
    INF = float("inf")
    mate_l: dict[int, int] = {}
    mate_r: dict[int, int] = {}
    adj = {u: list(nbrs(u)) for u in left}
    while True:
        dist = {}
        q = deque()
        for u in left:
            if u not in mate_l:
                dist[u] = 0
                q.append(u)
        found = False
        while q:
            u = q.popleft()
            for w in adj[u]:
                m = mate_r.get(w)
                if m is None:
                    found = True
                elif m not in dist:
                    dist[m] = dist[u] + 1
                    q.append(m)
        if not found:
            return mate_l

        def dfs(u) -> bool:
            for w in adj[u]:
                m = mate_r.get(w)
                if m is None or (dist.get(m) == dist[u] + 1 and dfs(m)):
                    mate_l[u] = w
                    mate_r[w] = u
                    return True
            dist[u] = INF
            return False

        for u in left:
            if u not in mate_l:
                dfs(u)


def hall_violator(left: Sequence[int], nbrs, mate_l: dict[int, int]) -> frozenset:
    """Left vertices reachable by alternating paths from an unmatched left vertex."""
    mate_r = {w: u for u, w in mate_l.items()}
    free = [u for u in left if u not in mate_l]
    seen = set(free)
    q = deque(free)
    while q:
        u = q.popleft()
        for w in nbrs(u):
            m = mate_r.get(w)
            if m is not None and m not in seen:
                seen.add(m)
                q.append(m)
    return frozenset(seen)


def bipartite_perfect_matching(g: Graph, sides) -> BipartiteMatchingResult:
    X, Y = sorted(sides[0]), sorted(sides[1])
    if len(X) != len(Y):
        raise PreconditionError("balanced-sides", f"|X|={len(X)} != |Y|={len(Y)}")
    xs, ys = set(X), set(Y)
    if xs & ys or (xs | ys) != set(range(g.n)):
        raise PreconditionError("sides", "X and Y must partition the vertex set")
    for u, v in g.edges():
        if (u in xs) == (v in xs):
            raise PreconditionError("bipartite", f"edge {u}-{v} inside one side")
    import sys

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * g.n + 100))
    nb = g.neighbors
    mate = hopcroft_karp(X, nb)
    if len(mate) == len(X):
        return BipartiteMatchingResult(frozenset(handle(u, w) for u, w in mate.items()), None)
    return BipartiteMatchingResult(None, hall_violator(X, nb, mate))

