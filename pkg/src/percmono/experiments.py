"""The reproducible experiment set, one function per checked claim.

Every function returns a :class:`Check` holding the measured values and a
pass flag evaluated at a fixed tolerance.  The acceptance tests and the
``reproduce-paper`` command both run these.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analysis
from .dust import PipePoint, dust_outcomes, scan_t_outcomes
from .exact import (RootBracket, h_of, isolate_root, theta_closed_form,
                    two_terminal_poly)
from .graph import make_box, make_theta, make_tree_glued, tree_glued_copies
from .mc import (P_C_HEXAGONAL, P_C_TRIANGULAR, McConfig, PairedDifference,
                 bisect_tau_c, bond_outcomes, estimate_F, estimate_F_lattice,
                 estimate_triangle_AB, Estimate)
from .poly import IntPoly

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass
class Check:
    number: int
    title: str
    passed: bool
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        check = fn(*args, **kwargs)
        check.seconds = time.perf_counter() - t0
        return check
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def warm_up():
    """Compile the numba kernels so timed checks measure computation only."""
    two_terminal_poly(make_theta(3), 0, 3)
    bond_outcomes(make_theta(3), [(0, 3)], 0.5, 0, 2)
    g = make_box(2, 1)
    dust_outcomes(g, 0.5, PipePoint.at_vertex(g.origin),
                  [PipePoint.interior((g.origin, g.vertex("e")), 0.5)], 0, 2)


@_timed
def theta_identities(n_range=range(3, 11)) -> Check:
    """Enumerated theta polynomials equal the closed forms, coefficientwise."""
    t0 = time.perf_counter()
    mismatches = []
    for n in n_range:
        g = make_theta(n)
        if two_terminal_poly(g, 0, n) != theta_closed_form(n, "peak"):
            mismatches.append((n, "peak"))
        if two_terminal_poly(g, 0, 1) != theta_closed_form(n, "middle"):
            mismatches.append((n, "middle"))
    runtime = time.perf_counter() - t0
    return Check(1, "theta polynomials: enumeration == closed form, n=3..10",
                 not mismatches and runtime < 1.0,
                 {"mismatches": mismatches, "runtime_s": runtime})


@_timed
def golden_ratio_threshold(tol=1e-10) -> Check:
    """Peak/middle crossing of P_4 sits at the golden-ratio conjugate."""
    t0 = time.perf_counter()
    peak, middle = theta_closed_form(4, "peak"), theta_closed_form(4, "middle")
    root = isolate_root(middle - peak, RootBracket(0.5, 0.7), tol=1e-13)
    grid = [Fraction(k, 100) for k in range(63, 100)]
    bad = [float(p) for p in grid if not peak(p) > middle(p)]
    runtime = time.perf_counter() - t0
    ok = abs(root - GOLDEN) <= tol and not bad and runtime < 1.0
    return Check(2, "P_4 crossing at (sqrt5-1)/2; peak > middle on p in [0.63, 0.99]",
                 ok, {"root": root, "error": abs(root - GOLDEN), "violations": bad,
                      "runtime_s": runtime})


@_timed
def glued_copies_match(samples=100_000, seed=2024, ps=(0.5, 0.7, 0.9)) -> Check:
    """Within-copy connection on G_1 of P_4 matches the P_4 polynomials."""
    g = make_tree_glued(4, 1)
    copies = tree_glued_copies(4, 1)
    peak, middle = theta_closed_form(4, "peak"), theta_closed_form(4, "middle")
    pairs, exact = [], []
    for ids in (copies[0], copies[1], copies[-1]):
        pairs += [(ids[0], ids[4]), (ids[0], ids[1])]
        exact += [peak, middle]
    rows = []
    ok = True
    for k, p in enumerate(ps):
        hits = bond_outcomes(g, pairs, p, seed + k, samples)
        for q, (pair, poly) in enumerate(zip(pairs, exact)):
            est = Estimate(int(hits[:, q].sum()), samples)
            err = abs(est.mean - poly(p))
            within = err <= 4 * est.ci_half_width
            ok &= within
            rows.append({"p": p, "pair": pair, "mean": est.mean, "exact": poly(p),
                         "err": err, "limit": 4 * est.ci_half_width})
    return Check(3, "G_1(P_4) within-copy MC matches P_4 polynomials (4 CI half-widths)",
                 bool(ok), {"rows": rows})


@_timed
def g_polynomial_facts() -> Check:
    t0 = time.perf_counter()
    g = analysis.g_poly()
    g1 = g(Fraction(1))
    g99 = g(Fraction(99, 100))
    residual = analysis.g_identity_residual()
    runtime = time.perf_counter() - t0
    ok = g1 == 1 and g99 > 0 and residual.is_zero() and runtime < 1.0
    return Check(4, "g(1)=1, g(0.99)>0, gap polynomial = z(z-1)^2 g(z) exactly", ok,
                 {"g(1)": g1, "g(0.99)": float(g99), "residual": residual.to_text(),
                  "z0_bracket": analysis.z0_threshold(), "runtime_s": runtime})


def _dust_runs(samples, seed, radii, lam):
    return {r: scan_t_outcomes(2, lam, [0.5, 1.0], McConfig(seed=seed, samples=samples,
                                                             box_radius=r))
            for r in radii}


_DUST_CACHE = {}


def dust_runs(samples=1_000_000, seed=11, radii=(6, 12), lam=0.02):
    key = (samples, seed, tuple(radii), lam)
    if key not in _DUST_CACHE:
        _DUST_CACHE[key] = _dust_runs(samples, seed, radii, lam)
    return _DUST_CACHE[key]


@_timed
def pipe_dust_nonmonotone(samples=1_000_000, seed=11, radii=(6, 12), lam=0.02) -> Check:
    """P(o<->e) - P(o<->e/2) > 0 with a 99% paired CI excluding 0."""
    rows = {}
    ok = True
    for r, hits in dust_runs(samples, seed, radii, lam).items():
        diff = PairedDifference.from_outcomes(hits[:, 1], hits[:, 0], confidence=0.99)
        rows[r] = {"diff": diff.mean, "ci99": diff.ci_half_width,
                   "p_half": float(hits[:, 0].mean()), "p_vertex": float(hits[:, 1].mean())}
        ok &= diff.mean > 0 and diff.excludes(0.0)
    return Check(5, f"Pipe-Dust lam={lam}: P(o<->e) > P(o<->e/2), radii {tuple(radii)}",
                 bool(ok), rows)


@_timed
def pipe_dust_bounds(samples=1_000_000, seed=11, radii=(6, 12), lam=0.02) -> Check:
    z = math.exp(-lam / 2)
    upper_mid = z * (2 - z)
    lower_vertex = 1 - (1 - z**6) ** 2 * (1 - z**2)
    rows = {}
    ok = True
    for r, hits in dust_runs(samples, seed, radii, lam).items():
        m_half, m_vertex = float(hits[:, 0].mean()), float(hits[:, 1].mean())
        s_half = math.sqrt(m_half * (1 - m_half) / samples)
        s_vertex = math.sqrt(m_vertex * (1 - m_vertex) / samples)
        ok &= m_half <= upper_mid + 4 * s_half and m_vertex >= lower_vertex - 4 * s_vertex
        rows[r] = {"mean_half": m_half, "upper": upper_mid, "sigma_half": s_half,
                   "mean_vertex": m_vertex, "lower": lower_vertex, "sigma_vertex": s_vertex}
    return Check(6, "Pipe-Dust estimates respect the small-rate bounds (4 sigma)",
                 bool(ok), rows)


def three_path_graph():
    """The two three-edge detours from o to e in Z^2, as a subgraph of the box."""
    box = make_box(2, 2)
    paths = [[(0, 0), (0, 1), (1, 1), (1, 0)], [(0, 0), (0, -1), (1, -1), (1, 0)]]
    keep = {tuple(sorted((box.id_of(a), box.id_of(b))))
            for path in paths for a, b in zip(path, path[1:])}
    return box.without_edges([e for e in box.edges if e not in keep])


@_timed
def small_and_large_p(samples=1_000_000, seed=7, radius=6) -> Check:
    """F(0.2) < 0.2 by simulation; F(0.99) > 0.99 certified exactly."""
    est = estimate_F(2, McConfig(seed=seed, samples=samples, box_radius=radius, p=0.2))
    low_ok = est.mean < 0.2 and est.excludes(0.2)
    g = three_path_graph()
    poly = two_terminal_poly(g, g.origin, g.vertex("e"))
    p = IntPoly.x()
    closed = 1 - (1 - p**3) ** 2
    at = Fraction(99, 100)
    box2 = make_box(2, 2, remove_origin_edge=True)
    box_poly = two_terminal_poly(box2, box2.origin, box2.vertex("e"))
    high_ok = poly == closed and poly(at) > at and box_poly(at) >= poly(at)
    return Check(7, "F(0.2) < 0.2 (MC, r=6); exact three-path bound certifies F(0.99) > 0.99",
                 bool(low_ok and high_ok),
                 {"F(0.2)": est.mean, "ci": est.interval, "p0_printed": analysis.p0(2),
                  "p0_path_bound": analysis.p0_path_bound(2),
                  "paths_poly(0.99)": float(poly(at)), "box_r2_poly(0.99)": float(box_poly(at))})


@_timed
def square_lattice_tau(samples=100_000, seed=3, radius=32, iterations=4,
                       big_radius=64, big_samples=100_000) -> Check:
    """Bisection on F(p) - p brackets 1/2; F(1/2) just below 1/2 on a large box."""
    bracket = bisect_tau_c(2, McConfig(seed=seed, samples=samples, box_radius=radius),
                           0.3, 0.9, iterations)
    est = estimate_F(2, McConfig(seed=seed + 1, samples=big_samples,
                                 box_radius=big_radius, p=0.5))
    ok = (0.5 in bracket and bracket.width <= 0.06 and not bracket.ambiguous
          and 0.45 <= est.mean <= 0.50)
    return Check(8, "square lattice: tau_c bracket contains 1/2 (width <= 0.06); "
                    "F(1/2, r=64) in [0.45, 0.50]", bool(ok),
                 {"bracket": (bracket.lo, bracket.hi), "ambiguous": bracket.ambiguous,
                  "evaluations": [(p, e.mean) for p, e in bracket.evaluations],
                  "F(0.5)": est.mean, "ci": est.interval})


@_timed
def star_triangle(samples=100_000, seed=5, radius=32, hex_radius=32) -> Check:
    p = P_C_TRIANGULAR
    a, b = estimate_triangle_AB(p, McConfig(seed=seed, samples=samples, box_radius=radius))
    f_t = estimate_F_lattice("triangular", p,
                             McConfig(seed=seed + 1, samples=samples, box_radius=radius))
    f_h = estimate_F_lattice("hexagonal", P_C_HEXAGONAL,
                             McConfig(seed=seed + 2, samples=samples, box_radius=hex_radius))
    total = a.mean + b.mean
    ok = (0.95 <= total <= 1.05 and f_t.mean > p and f_t.excludes(p)
          and f_h.mean < P_C_HEXAGONAL and f_h.excludes(P_C_HEXAGONAL))
    return Check(9, "star-triangle: A+B ~ 1, F_T(p_c) > p_c, F_H(p_c^H) < p_c^H", bool(ok),
                 {"p": p, "A": a.mean, "B": b.mean, "A+B": total,
                  "F_T": f_t.mean, "F_T_ci": f_t.interval,
                  "F_H": f_h.mean, "F_H_ci": f_h.interval})


def h_graphs():
    single = make_theta(3).without_edges([(1, 3), (0, 2), (2, 3)])
    path = make_theta(3).without_edges([(0, 2), (2, 3)])
    cross = make_box(2, 1, remove_origin_edge=True)
    box = make_box(2, 2, remove_origin_edge=True)
    return {
        "single edge": (single, 0, 1),
        "two-edge path": (path, 0, 3),
        "box d=2 r=1 minus {o,e}": (cross, cross.origin, cross.vertex("e")),
        "box d=2 r=2 minus {o,e}": (box, box.origin, box.vertex("e")),
    }


@_timed
def log_ratio_monotone(tol=1e-12) -> Check:
    """h(p) = log P / log p on the grid 0.05..0.95, in the extended reals.

    At r=1 the box is a cross, so o and e are disconnected once {o, e} is
    gone and h is identically +inf; the r=2 box carries the non-trivial case.
    """
    grid = [k / 100 for k in range(5, 100, 5)]
    rows = {}
    ok = True
    for name, (g, u, v) in h_graphs().items():
        poly = two_terminal_poly(g, u, v)
        hs = [h_of(poly, p) for p in grid]
        mono = all(b <= a + tol or a == b for a, b in zip(hs, hs[1:]))
        rows[name] = {"poly": poly.to_text(), "h": hs, "non_increasing": mono,
                      "degenerate": poly.is_zero()}
        ok &= mono
    # at least one non-degenerate box case must be checked
    ok &= not rows["box d=2 r=2 minus {o,e}"]["degenerate"]
    return Check(10, "log P / log p is non-increasing on p = 0.05..0.95", bool(ok), rows)


def grid_minimum(a, b, c, lam, points=10_001):
    t = np.linspace(0.0, 1.0, points)
    vals = a * np.exp(-t * lam) + b * np.exp(-(1 - t) * lam) - c * np.exp(-lam)
    k = int(np.argmin(vals))
    return float(t[k]), float(vals[k])


@_timed
def minimizer_trichotomy(draws=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    labels = {analysis.MIN_AT_0: 0, analysis.MIN_AT_1: 0, analysis.INTERIOR: 0}
    failures = []
    points = 10_001
    for _ in range(draws):
        a = float(rng.uniform(0.01, 1.0))
        b, c = float(rng.uniform(0, 1)), float(rng.uniform(0, 1))
        lam = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
        res = analysis.minimize_f(a, b, c, lam)
        labels[res.case_label] = labels.get(res.case_label, 0) + 1
        t_grid, v_grid = grid_minimum(a, b, c, lam, points)
        # |f'| <= lam (a + b), so the grid minimum is within that times the spacing
        slack = lam * (a + b) / (points - 1)
        agree = res.value <= v_grid + 1e-12 and v_grid - res.value <= slack
        if res.case_label == analysis.MIN_AT_0:
            agree &= t_grid == 0.0
        elif res.case_label == analysis.MIN_AT_1:
            agree &= t_grid == 1.0
        else:
            agree &= abs(t_grid - res.t_star) <= 0.5 / (points - 1) + 1e-9 or (
                v_grid - res.value <= 1e-12)
        if not agree:
            failures.append((a, b, c, lam, res, t_grid, v_grid))
    ok = not failures and all(v > 0 for v in labels.values())
    return Check(11, "edge-profile minimiser agrees with a 10^4-point grid on 1000 draws",
                 ok, {"labels": labels, "failures": failures[:5]})


@_timed
def model_equivalence(samples=100_000, seed=13, ps=(0.3, 0.6, 0.9)) -> Check:
    g = make_theta(4)
    peak, middle = theta_closed_form(4, "peak"), theta_closed_form(4, "middle")
    rows = []
    ok = True
    for k, p in enumerate(ps):
        lam = analysis.lambda_of_p(p)
        hits = dust_outcomes(g, lam, PipePoint.at_vertex(0),
                             [PipePoint.at_vertex(4), PipePoint.at_vertex(1)], seed + k, samples)
        for q, poly in enumerate((peak, middle)):
            est = Estimate(int(hits[:, q].sum()), samples)
            err = abs(est.mean - poly(p))
            ok &= err <= 4 * est.ci_half_width
            rows.append({"p": p, "target": (4, 1)[q], "mean": est.mean, "exact": poly(p),
                         "err": err, "limit": 4 * est.ci_half_width})
    return Check(12, "Pipe-Dust vertex connectivity on P_4 matches Bernoulli polynomials",
                 bool(ok), {"rows": rows})


ALL_CHECKS = (
    theta_identities, golden_ratio_threshold, glued_copies_match, g_polynomial_facts,
    pipe_dust_nonmonotone, pipe_dust_bounds, small_and_large_p, square_lattice_tau,
    star_triangle, log_ratio_monotone, minimizer_trichotomy, model_equivalence,
)


def run_all(progress=None) -> list[Check]:
    warm_up()
    results = []
    for fn in ALL_CHECKS:
        check = fn()
        if progress:
            progress(check)
        results.append(check)
    return results


def markdown_report(results) -> str:
    lines = ["# Reproduction report", "",
             "| # | check | result | seconds |", "|---|---|---|---|"]
    for c in results:
        lines.append(f"| {c.number} | {c.title} | {'PASS' if c.passed else 'FAIL'} "
                     f"| {c.seconds:.1f} |")
    lines.append("")
    for c in results:
        lines += [f"## {c.number}. {c.title}", "", "```"]
        lines += [f"{k}: {v}" for k, v in c.values.items()]
        lines += ["```", ""]
    return "\n".join(lines)
