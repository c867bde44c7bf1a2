"""Exact two-terminal connection polynomials by subset enumeration."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from .errors import BudgetExceeded, InvalidBracket, InvalidParameter
from .graph import Graph
from .poly import IntPoly, bernstein_sum, sign_at

ENUMERATION_BOUND = 28

P = IntPoly.x()


@dataclass(frozen=True)
class RootBracket:
    """Interval ``(lo, hi)`` in [0, 1] across which a target changes sign.

    ``ambiguous`` is set by noisy searches that stopped at a point where the
    sign could not be resolved; ``evaluations`` records what was measured.
    """

    lo: float
    hi: float
    ambiguous: bool = False
    evaluations: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not 0 <= self.lo < self.hi <= 1:
            raise InvalidParameter(f"bracket needs 0 <= lo < hi <= 1, got ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@njit(cache=True, nogil=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True, nogil=True)
def _count_connecting(n, edges, u, v, start, stop):
    """``counts[k]`` = number of size-k edge subsets (masks in [start, stop))
    whose open edges connect ``u`` and ``v``."""
    m = edges.shape[0]
    counts = np.zeros(m + 1, dtype=np.int64)
    parent = np.empty(n, dtype=np.int64)
    for mask in range(start, stop):
        for i in range(n):
            parent[i] = i
        size = 0
        for j in range(m):
            if (mask >> j) & 1:
                size += 1
                a = _find(parent, edges[j, 0])
                b = _find(parent, edges[j, 1])
                if a != b:
                    parent[a] = b
        if _find(parent, u) == _find(parent, v):
            counts[size] += 1
    return counts


def _biconnected_blocks(n, edges):
    """Edge-index lists of the biconnected blocks (iterative Tarjan)."""
    adj = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    disc = [-1] * n
    low = [0] * n
    timer = 0
    blocks = []
    stack = []
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        work = [(root, -1, iter(adj[root]))]
        while work:
            x, via, it = work[-1]
            advanced = False
            for y, ei in it:
                if ei == via:
                    continue
                if disc[y] == -1:
                    stack.append(ei)
                    disc[y] = low[y] = timer
                    timer += 1
                    work.append((y, ei, iter(adj[y])))
                    advanced = True
                    break
                if disc[y] < disc[x]:
                    stack.append(ei)
                    low[x] = min(low[x], disc[y])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[x])
                if low[x] >= disc[parent]:
                    block = []
                    while True:
                        ei = stack.pop()
                        block.append(ei)
                        if ei == via:
                            break
                    blocks.append(block)
    return blocks


def relevant_edges(g: Graph, u: int, v: int) -> list[int]:
    """Indices of edges lying in a block on the block-cut path from u to v.

    Every other edge hangs off a cut vertex away from that path, so summing
    over its states contributes a factor of exactly one.
    """
    blocks = _biconnected_blocks(g.n_vertices, g.edges)
    # bipartite graph: vertex nodes 0..n-1, block nodes n..n+B-1
    n = g.n_vertices
    members = [[] for _ in range(n)]
    for bi, block in enumerate(blocks):
        verts = {w for ei in block for w in g.edges[ei]}
        for w in verts:
            members[w].append(n + bi)
    block_verts = [{w for ei in b for w in g.edges[ei]} for b in blocks]
    prev = {u: None}
    frontier = [u]
    while frontier and v not in prev:
        nxt = []
        for node in frontier:
            neigh = members[node] if node < n else block_verts[node - n]
            for w in neigh:
                if w not in prev:
                    prev[w] = node
                    nxt.append(w)
        frontier = nxt
    if v not in prev:
        return []
    chosen = []
    node = v
    while node is not None:
        if node >= n:
            chosen.extend(blocks[node - n])
        node = prev[node]
    return sorted(chosen)


def two_terminal_poly(g: Graph, u: int, v: int, forced_closed=(), *,
                      prune: bool = False, workers: int = 1,
                      bound: int = ENUMERATION_BOUND) -> IntPoly:
    """Exact ``P_p(u <-> v)`` with the ``forced_closed`` edges deleted.

    Sums ``p**|w| (1-p)**(m-|w|)`` over the open-edge subsets ``w`` that join
    ``u`` and ``v``.  With ``prune`` the enumeration is restricted to the
    blocks between ``u`` and ``v`` (edges elsewhere cannot matter), which lets
    graphs with many pendant pieces through the bound.
    """
    if u not in g or v not in g:
        raise InvalidParameter(f"terminals ({u}, {v}) must be vertices of the graph")
    if forced_closed:
        g = g.without_edges(forced_closed)
    if u == v:
        return IntPoly.const(1)
    edge_idx = relevant_edges(g, u, v) if prune else list(range(g.n_edges))
    m = len(edge_idx)
    if m > bound:
        raise BudgetExceeded(
            f"{m} free edges exceed the enumeration bound of {bound} (2^{m} subsets)")
    if m == 0:
        return IntPoly()
    used = sorted({w for i in edge_idx for w in g.edges[i]} | {u, v})
    local = {w: k for k, w in enumerate(used)}
    edges = np.array([[local[g.edges[i][0]], local[g.edges[i][1]]] for i in edge_idx],
                     dtype=np.int64)
    total = 1 << m
    workers = max(1, min(workers, total))
    cuts = [total * k // workers for k in range(workers + 1)]
    jobs = [(len(used), edges, local[u], local[v], a, b) for a, b in zip(cuts, cuts[1:])]
    if workers == 1:
        parts = [_count_connecting(*jobs[0])]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _count_connecting(*job), jobs))
    counts = [int(c) for c in np.sum(parts, axis=0)]
    return bernstein_sum(counts, m)


def theta_closed_form(n: int, target: str) -> IntPoly:
    """Closed-form connection polynomial from ``v_0`` in the theta graph."""
    if n < 3:
        raise InvalidParameter(f"theta graph needs n >= 3, got {n}")
    two_path = 1 - P * P
    if target == "peak":
        return 1 - two_path ** (n - 1)
    if target == "middle":
        return P + (1 - P) * P * (1 - two_path ** (n - 2))
    raise InvalidParameter(f"target must be 'peak' or 'middle', got {target!r}")


def isolate_root(a: IntPoly, bracket: RootBracket, tol: float = 1e-12) -> float:
    """Bisection with exact rational sign tests; returns the midpoint."""
    lo, hi = Fraction(bracket.lo), Fraction(bracket.hi)
    s_lo, s_hi = sign_at(a, lo), sign_at(a, hi)
    if s_lo == 0:
        return float(lo)
    if s_hi == 0:
        return float(hi)
    if s_lo == s_hi:
        raise InvalidBracket(f"no sign change on ({float(lo)}, {float(hi)})",
                             details={"f(lo)": float(a(lo)), "f(hi)": float(a(hi))})
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = sign_at(a, mid)
        if s == 0:
            return float(mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def bracket_root(a: IntPoly, bracket: RootBracket, tol: float = 1e-12) -> RootBracket:
    """Like :func:`isolate_root` but returns the final interval of width <= tol."""
    lo, hi = Fraction(bracket.lo), Fraction(bracket.hi)
    s_lo = sign_at(a, lo)
    if s_lo == 0 or s_lo == sign_at(a, hi):
        raise InvalidBracket(f"no strict sign change on ({float(lo)}, {float(hi)})")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = sign_at(a, mid)
        if s == 0:
            lo, hi = mid - Fraction(tol) / 4, mid + Fraction(tol) / 4
            break
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return RootBracket(float(lo), float(hi))


def sign_changes(a: IntPoly, grid) -> int:
    signs = [s for s in (sign_at(a, x) for x in grid) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def h_of(poly: IntPoly, p: float) -> float:
    if not 0 < p < 1:
        raise InvalidParameter(f"log-ratio needs 0 < p < 1, got {p}")
    value = poly(p)
    if value <= 0:
        # log 0 / log p with log p < 0
        return math.inf
    return math.log(value) / math.log(p)


def log_ratio_h(g: Graph, u: int, v: int, forced_closed, p: float) -> float:
    """``log P_p(u <-> v) / log p``; non-increasing in p for increasing events."""
    if not 0 < p < 1:
        raise InvalidParameter(f"log-ratio needs 0 < p < 1, got {p}")
    if u == v:
        raise InvalidParameter("terminals must be distinct")
    return h_of(two_terminal_poly(g, u, v, forced_closed), p)
