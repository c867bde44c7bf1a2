"""Seeded Monte Carlo estimation of connection probabilities.

Sample ``i`` of a run draws every edge state from the counter-based stream
``(seed, i)`` (see :mod:`percmono.rng`), so runs are bit-identical whatever
the worker count, and runs at different ``p`` or on nested boxes share their
random numbers edge by edge.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from statistics import NormalDist

import numpy as np
from numba import njit

from .errors import InvalidBracket, InvalidParameter
from .exact import RootBracket, _find
from .graph import Graph, make_box, make_hexagonal_patch, make_triangular_patch
from .rng import MASK64, derive_seed, sample_stream, uniform


def _z(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + confidence / 2)


@dataclass(frozen=True)
class Estimate:
    """Binomial proportion with a Wilson score interval."""

    successes: int
    samples: int
    confidence: float = 0.95

    def __post_init__(self):
        if self.samples < 1 or not 0 <= self.successes <= self.samples:
            raise InvalidParameter(f"bad counts {self.successes}/{self.samples}")

    @property
    def mean(self) -> float:
        return self.successes / self.samples

    def _wilson(self):
        n, z = self.samples, _z(self.confidence)
        phat = self.mean
        denom = 1 + z * z / n
        centre = (phat + z * z / (2 * n)) / denom
        half = z / denom * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
        return centre, half

    @property
    def ci_half_width(self) -> float:
        return self._wilson()[1]

    @property
    def interval(self) -> tuple[float, float]:
        centre, half = self._wilson()
        # the exact interval always contains the mean; clamp away rounding
        return max(0.0, min(centre - half, self.mean)), min(1.0, max(centre + half, self.mean))

    def excludes(self, x: float) -> bool:
        lo, hi = self.interval
        return not lo <= x <= hi

    def at(self, confidence: float) -> Estimate:
        return replace(self, confidence=confidence)


@dataclass(frozen=True)
class PairedDifference:
    """Mean of ``X_i - Y_i`` over paired samples, normal-approximation CI."""

    mean: float
    ci_half_width: float
    samples: int

    @classmethod
    def from_outcomes(cls, x, y, confidence: float = 0.95) -> PairedDifference:
        d = np.asarray(x, dtype=np.int8) - np.asarray(y, dtype=np.int8)
        n = d.size
        mean = float(d.mean())
        sd = float(d.std(ddof=1)) if n > 1 else 0.0
        return cls(mean, _z(confidence) * sd / math.sqrt(n), n)

    @property
    def interval(self) -> tuple[float, float]:
        return self.mean - self.ci_half_width, self.mean + self.ci_half_width

    def excludes(self, x: float) -> bool:
        lo, hi = self.interval
        return not lo <= x <= hi


class DisjointSets:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass(frozen=True)
class McConfig:
    seed: int = 0
    samples: int = 10_000
    box_radius: int = 8
    p: float = 0.5

    def __post_init__(self):
        if self.samples < 1:
            raise InvalidParameter("samples must be >= 1")
        if not 0 <= self.p <= 1:
            raise InvalidParameter(f"p must lie in [0, 1], got {self.p}")
        if self.box_radius < 1:
            raise InvalidParameter("box_radius must be >= 1")


@njit(cache=True, nogil=True)
def _bond_outcomes(n, edges, keys, p, seed, start, stop, pairs):
    out = np.zeros((stop - start, pairs.shape[0]), dtype=np.uint8)
    parent = np.empty(n, dtype=np.int64)
    zero = np.uint64(0)
    for i in range(start, stop):
        stream = sample_stream(seed, np.uint64(i))
        for a in range(n):
            parent[a] = a
        for j in range(edges.shape[0]):
            if uniform(stream, keys[j], zero) < p:
                ra = _find(parent, edges[j, 0])
                rb = _find(parent, edges[j, 1])
                if ra != rb:
                    parent[ra] = rb
        for q in range(pairs.shape[0]):
            if _find(parent, pairs[q, 0]) == _find(parent, pairs[q, 1]):
                out[i - start, q] = 1
    return out


def run_chunked(kernel, args_before, args_after, samples: int, workers: int = 1):
    """Evaluate ``kernel(*before, start, stop, *after)`` over contiguous
    sample ranges and stack the per-sample rows in index order."""
    workers = max(1, min(int(workers), samples))
    cuts = [samples * k // workers for k in range(workers + 1)]
    calls = [(*args_before, a, b, *args_after) for a, b in zip(cuts, cuts[1:])]
    if workers == 1:
        parts = [kernel(*calls[0])]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: kernel(*c), calls))
    return np.concatenate(parts, axis=0)


def bond_outcomes(g: Graph, pairs, p: float, seed: int, samples: int,
                  workers: int = 1) -> np.ndarray:
    """Per-sample connection indicators, shape ``(samples, len(pairs))``."""
    if not 0 <= p <= 1:
        raise InvalidParameter(f"p must lie in [0, 1], got {p}")
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    for u, v in pairs:
        if u not in g or v not in g:
            raise InvalidParameter(f"({u}, {v}) are not both vertices")
    before = (g.n_vertices, g.edge_array(), g.key_array(), float(p),
              np.uint64(seed & MASK64))
    return run_chunked(_bond_outcomes, before, (pairs,), samples, workers).astype(bool)


def estimate_connection(g: Graph, u: int, v: int, forced_closed, cfg: McConfig,
                        *, workers: int = 1, confidence: float = 0.95) -> Estimate:
    if forced_closed:
        g = g.without_edges(forced_closed)
    hits = bond_outcomes(g, [(u, v)], cfg.p, cfg.seed, cfg.samples, workers)
    return Estimate(int(hits.sum()), cfg.samples, confidence)


@lru_cache(maxsize=16)
def conditioned_box(d: int, r: int) -> Graph:
    return make_box(d, r, remove_origin_edge=True)


@lru_cache(maxsize=16)
def lattice_patch(lattice: str, r: int, drop: str = "edge") -> Graph:
    """Lattice patch with either the origin edge or the origin triangle deleted."""
    if lattice == "triangular":
        g = make_triangular_patch(r)
    elif lattice == "hexagonal":
        g = make_hexagonal_patch(r)
    else:
        raise InvalidParameter(f"lattice must be 'triangular' or 'hexagonal', got {lattice!r}")
    o, e = g.origin, g.vertex("e")
    if drop == "edge":
        return g.without_edges([(o, e)])
    z = g.vertex("z")
    return g.without_edges([(o, e), (e, z), (o, z)])


def estimate_F(d: int, cfg: McConfig, *, workers: int = 1,
               confidence: float = 0.95) -> Estimate:
    """``P_p(o <-> e | {o, e} closed)`` on the L1 box of radius ``cfg.box_radius``."""
    if d < 2:
        raise InvalidParameter(f"d must be >= 2, got {d}")
    g = conditioned_box(d, cfg.box_radius)
    return estimate_connection(g, g.origin, g.vertex("e"), (), cfg,
                               workers=workers, confidence=confidence)


def bisect_tau_c(d: int, cfg_template: McConfig, p_lo: float, p_hi: float,
                 iterations: int, *, workers: int = 1,
                 confidence: float = 0.95) -> RootBracket:
    """Bisect on the sign of ``F(p) - p``.

    Each evaluation uses its own derived seed.  If the confidence interval of
    ``F`` at a midpoint contains the midpoint, refinement stops and the
    current bracket is returned flagged ``ambiguous``.
    """
    if iterations < 0:
        raise InvalidParameter("iterations must be >= 0")
    if not 0 <= p_lo < p_hi <= 1:
        raise InvalidParameter(f"need 0 <= p_lo < p_hi <= 1, got ({p_lo}, {p_hi})")
    evals = []

    def side(p, step):
        cfg = replace(cfg_template, p=p, seed=derive_seed(cfg_template.seed, step))
        est = estimate_F(d, cfg, workers=workers, confidence=confidence)
        evals.append((p, est))
        if not est.excludes(p):
            return 0
        return 1 if est.mean > p else -1

    s_lo, s_hi = side(p_lo, 0), side(p_hi, 1)
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise InvalidBracket(
            f"F(p) - p is not significantly of opposite signs at {p_lo} and {p_hi}",
            details=[(p, est.mean, est.interval) for p, est in evals])
    lo, hi = p_lo, p_hi
    for k in range(iterations):
        mid = (lo + hi) / 2
        s = side(mid, k + 2)
        if s == 0:
            return RootBracket(lo, hi, ambiguous=True, evaluations=tuple(evals))
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return RootBracket(lo, hi, evaluations=tuple(evals))


def estimate_triangle_AB(p: float, cfg: McConfig, *, workers: int = 1,
                         confidence: float = 0.95) -> tuple[Estimate, Estimate]:
    """Estimate ``A = P(x<->y or x<->z)`` and ``B = P(x<->y)`` on the triangular
    patch with the triangle ``{x, y, z} = {o, e, z}`` deleted, from one
    sample stream."""
    if cfg.box_radius < 2:
        raise InvalidParameter("triangular patch radius must be >= 2")
    g = lattice_patch("triangular", cfg.box_radius, "triangle")
    x, y, z = g.origin, g.vertex("e"), g.vertex("z")
    hits = bond_outcomes(g, [(x, y), (x, z)], p, cfg.seed, cfg.samples, workers)
    a = int((hits[:, 0] | hits[:, 1]).sum())
    b = int(hits[:, 0].sum())
    return Estimate(a, cfg.samples, confidence), Estimate(b, cfg.samples, confidence)


def estimate_F_lattice(lattice: str, p: float, cfg: McConfig, *, workers: int = 1,
                       confidence: float = 0.95) -> Estimate:
    if cfg.box_radius < 2:
        raise InvalidParameter("patch radius must be >= 2")
    g = lattice_patch(lattice, cfg.box_radius, "edge")
    hits = bond_outcomes(g, [(g.origin, g.vertex("e"))], p, cfg.seed, cfg.samples, workers)
    return Estimate(int(hits.sum()), cfg.samples, confidence)


def triangular_F_from_AB(p: float, a: float, b: float) -> float:
    """Condition on the two other triangle edges: both open, one open, none."""
    return p * p + 2 * p * (1 - p) * a + (1 - p) ** 2 * b


P_C_TRIANGULAR = 2 * math.sin(math.pi / 18)
P_C_HEXAGONAL = 1 - P_C_TRIANGULAR
