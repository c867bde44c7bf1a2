"""Pipe-Dust percolation: Poisson obstructions on the edge segments.

An edge carries ``k ~ Poisson(lam)`` dust particles at i.i.d. uniform
positions.  Vertex-to-vertex connectivity only sees whether an edge is
dust-free (probability ``exp(-lam)``), so it is Bernoulli bond percolation
with ``p = exp(-lam)``; with the same seed and edge keys the dust-free edges
are exactly the open edges of :mod:`percmono.mc`.

An interior point ``(e, t)`` of ``e = (a, b)`` reaches ``a`` iff every
particle lies above ``t`` and reaches ``b`` iff every particle lies below
``t``; a particle exactly at ``t`` blocks both sides.  Two interior points
of one edge also see each other directly when no particle lies between them
(endpoints included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .errors import InvalidParameter
from .exact import _find
from .graph import Graph, make_box
from .mc import DisjointSets, Estimate, McConfig, run_chunked
from .rng import MASK64, poisson_inverse, sample_stream, uniform, uniform_open


@dataclass(frozen=True)
class PipePoint:
    """A vertex, or the point at parameter ``t`` along an edge ``(u, v)``, u < v."""

    vertex: int | None = None
    edge: tuple[int, int] | None = None
    t: float | None = None

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise InvalidParameter("a pipe point is either a vertex or an edge point")
        if self.edge is not None:
            if not 0 < self.t < 1:
                raise InvalidParameter(f"interior parameter must lie in (0, 1), got {self.t}")
            u, v = self.edge
            if u > v:
                object.__setattr__(self, "edge", (v, u))
                object.__setattr__(self, "t", 1 - self.t)

    @classmethod
    def at_vertex(cls, v: int) -> PipePoint:
        return cls(vertex=int(v))

    @classmethod
    def interior(cls, edge, t: float) -> PipePoint:
        return cls(edge=(int(edge[0]), int(edge[1])), t=float(t))

    def encode(self, g: Graph) -> tuple[int, int, float]:
        """``(vertex or -1, edge index or -1, t)`` for the sampling kernels."""
        if self.vertex is not None:
            if self.vertex not in g:
                raise InvalidParameter(f"{self.vertex} is not a vertex")
            return self.vertex, -1, 0.0
        return -1, g.edge_index(*self.edge), self.t


@dataclass(frozen=True)
class DustConfig:
    """Sorted dust positions per edge, aligned with ``Graph.edges``."""

    positions: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for pos in self.positions:
            if any(not 0 < x < 1 for x in pos):
                raise InvalidParameter("dust positions must lie in (0, 1)")
            if any(b <= a for a, b in zip(pos, pos[1:])):
                raise InvalidParameter("dust positions must be strictly increasing")

    def dust_free(self, j: int) -> bool:
        return not self.positions[j]

    def without(self, j: int, x: float) -> DustConfig:
        pos = list(self.positions)
        pos[j] = tuple(y for y in pos[j] if y != x)
        return DustConfig(tuple(pos))


@njit(cache=True, nogil=True)
def _edge_dust(stream, key, lam):
    k = poisson_inverse(uniform(stream, key, np.uint64(0)), lam)
    pos = np.empty(k, dtype=np.float64)
    for j in range(k):
        pos[j] = uniform_open(stream, key, np.uint64(j + 1))
    pos.sort()
    return pos


def _check_lambda(lam):
    if not lam >= 0 or math.isinf(lam):
        raise InvalidParameter(f"dust rate must be a finite number >= 0, got {lam}")


def sample_dust(g: Graph, lam: float, seed: int, sample_index: int) -> DustConfig:
    """The dust configuration of sample ``sample_index`` under ``seed``."""
    _check_lambda(lam)
    stream = np.uint64(sample_stream(np.uint64(seed & MASK64), np.uint64(sample_index)))
    out = []
    for key in g.edge_keys:
        pos = _edge_dust(stream, np.uint64(key), float(lam))
        out.append(tuple(sorted(set(pos.tolist()))))
    return DustConfig(tuple(out))


def _attachments(g: Graph, cfg: DustConfig, ds: DisjointSets, pt: PipePoint) -> set[int]:
    if pt.vertex is not None:
        return {ds.find(pt.vertex)}
    j = g.edge_index(*pt.edge)
    a, b = g.edges[j]
    pos = cfg.positions[j]
    out = set()
    if all(x > pt.t for x in pos):
        out.add(ds.find(a))
    if all(x < pt.t for x in pos):
        out.add(ds.find(b))
    return out


def _on_graph(g: Graph, pt: PipePoint) -> None:
    if pt.vertex is not None:
        if pt.vertex not in g:
            raise InvalidParameter(f"{pt.vertex} is not a vertex")
    elif not g.has_edge(*pt.edge):
        raise InvalidParameter(f"{pt.edge} is not an edge")


def dust_connected(g: Graph, cfg: DustConfig, a: PipePoint, b: PipePoint) -> bool:
    """Is there a dust-avoiding path from ``a`` to ``b`` inside the pipes?"""
    _on_graph(g, a)
    _on_graph(g, b)
    if len(cfg.positions) != g.n_edges:
        raise InvalidParameter("dust configuration does not match the graph")
    if a == b:
        return True
    ds = DisjointSets(g.n_vertices)
    for j, (u, v) in enumerate(g.edges):
        if cfg.dust_free(j):
            ds.union(u, v)
    if a.edge is not None and a.edge == b.edge:
        lo, hi = sorted((a.t, b.t))
        if not any(lo <= x <= hi for x in cfg.positions[g.edge_index(*a.edge)]):
            return True
    return bool(_attachments(g, cfg, ds, a) & _attachments(g, cfg, ds, b))


@njit(cache=True, nogil=True)
def _attach(parent, edges, keys, stream, lam, q, vertex, edge, t):
    """Components reachable from a point: (left, right), -1 when blocked."""
    if vertex >= 0:
        return _find(parent, vertex), -1
    key = keys[edge]
    a = _find(parent, edges[edge, 0])
    b = _find(parent, edges[edge, 1])
    if uniform(stream, key, np.uint64(0)) < q:
        return a, b
    pos = _edge_dust(stream, key, lam)
    left = a
    right = b
    for x in pos:
        if x <= t:
            left = -1
        if x >= t:
            right = -1
    return left, right


@njit(cache=True, nogil=True)
def _clear_between(stream, key, lam, q, t1, t2):
    if uniform(stream, key, np.uint64(0)) < q:
        return True
    lo = min(t1, t2)
    hi = max(t1, t2)
    for x in _edge_dust(stream, key, lam):
        if lo <= x <= hi:
            return False
    return True


@njit(cache=True, nogil=True)
def _dust_outcomes(n, edges, keys, lam, seed, start, stop, pv, pe, pt):
    """Row ``i``: does point 0 connect to each of points 1..?"""
    ntarget = pv.shape[0] - 1
    out = np.zeros((stop - start, ntarget), dtype=np.uint8)
    parent = np.empty(n, dtype=np.int64)
    q = np.exp(-lam)
    zero = np.uint64(0)
    for i in range(start, stop):
        stream = sample_stream(seed, np.uint64(i))
        for a in range(n):
            parent[a] = a
        for j in range(edges.shape[0]):
            if uniform(stream, keys[j], zero) < q:
                ra = _find(parent, edges[j, 0])
                rb = _find(parent, edges[j, 1])
                if ra != rb:
                    parent[ra] = rb
        s0, s1 = _attach(parent, edges, keys, stream, lam, q, pv[0], pe[0], pt[0])
        for k in range(1, ntarget + 1):
            if pv[k] == pv[0] and pe[k] == pe[0] and pt[k] == pt[0]:
                out[i - start, k - 1] = 1
                continue
            if pe[0] >= 0 and pe[k] == pe[0]:
                if _clear_between(stream, keys[pe[0]], lam, q, pt[0], pt[k]):
                    out[i - start, k - 1] = 1
                    continue
            t0, t1 = _attach(parent, edges, keys, stream, lam, q, pv[k], pe[k], pt[k])
            if (s0 >= 0 and (s0 == t0 or s0 == t1)) or (s1 >= 0 and (s1 == t0 or s1 == t1)):
                out[i - start, k - 1] = 1
    return out


def dust_outcomes(g: Graph, lam: float, source: PipePoint, targets, seed: int,
                  samples: int, workers: int = 1) -> np.ndarray:
    """Per-sample indicators ``source <-> targets[j]``, shape ``(samples, len(targets))``.

    All targets of one sample see the same dust (common random numbers).
    """
    _check_lambda(lam)
    for pt in (source, *targets):
        _on_graph(g, pt)
    enc = [pt.encode(g) for pt in (source, *targets)]
    pv = np.array([e[0] for e in enc], dtype=np.int64)
    pe = np.array([e[1] for e in enc], dtype=np.int64)
    pt = np.array([e[2] for e in enc], dtype=np.float64)
    before = (g.n_vertices, g.edge_array(), g.key_array(), float(lam),
              np.uint64(seed & MASK64))
    return run_chunked(_dust_outcomes, before, (pv, pe, pt), samples, workers).astype(bool)


@lru_cache(maxsize=16)
def _box(d: int, r: int) -> Graph:
    return make_box(d, r)


def axis_point(g: Graph, t: float) -> PipePoint:
    """The point ``t * e`` on the segment from the origin to ``e`` (t in (0, 1])."""
    if not 0 < t <= 1:
        raise InvalidParameter(f"t must lie in (0, 1], got {t}")
    e = g.vertex("e")
    if t == 1:
        return PipePoint.at_vertex(e)
    return PipePoint.interior((g.origin, e), t)


def estimate_dust_connection(d: int, lam: float, target: PipePoint, cfg: McConfig, *,
                             workers: int = 1, confidence: float = 0.95) -> Estimate:
    """``P_lam(o <-> target)`` on the L1 box of radius ``cfg.box_radius``."""
    g = _box(d, cfg.box_radius)
    hits = dust_outcomes(g, lam, PipePoint.at_vertex(g.origin), [target],
                         cfg.seed, cfg.samples, workers)
    return Estimate(int(hits.sum()), cfg.samples, confidence)


def scan_t_outcomes(d: int, lam: float, t_grid, cfg: McConfig, *,
                    workers: int = 1) -> np.ndarray:
    g = _box(d, cfg.box_radius)
    targets = [axis_point(g, t) for t in t_grid]
    return dust_outcomes(g, lam, PipePoint.at_vertex(g.origin), targets,
                         cfg.seed, cfg.samples, workers)


def scan_t(d: int, lam: float, t_grid, cfg: McConfig, *, workers: int = 1,
           confidence: float = 0.95) -> list[tuple[float, Estimate]]:
    """``P_lam(o <-> t e)`` along ``t_grid`` with the same dust for every t."""
    t_grid = [float(t) for t in t_grid]
    hits = scan_t_outcomes(d, lam, t_grid, cfg, workers=workers)
    return [(t, Estimate(int(hits[:, k].sum()), cfg.samples, confidence))
            for k, t in enumerate(t_grid)]
