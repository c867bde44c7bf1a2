"""Closed-form quantities: the edge-profile function and its minimiser,
the small-rate bounds, the polynomial ``g``, and threshold formulas.

Floating-point evaluations live here; exact identities go through
:class:`~percmono.poly.IntPoly`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameter
from .exact import RootBracket, bracket_root, sign_changes
from .poly import IntPoly

MIN_AT_0, MIN_AT_1, INTERIOR, DEGENERATE = "min_at_0", "min_at_1", "interior", "degenerate"

Z = IntPoly.x()


@dataclass(frozen=True)
class FMinResult:
    case_label: str
    t_star: float
    value: float


def _unit(name, x):
    if not 0 <= x <= 1:
        raise InvalidParameter(f"{name} must lie in [0, 1], got {x}")


def f_lambda(a: float, b: float, c: float, lam: float, t: float) -> float:
    """``a e^{-t lam} + b e^{-(1-t) lam} - c e^{-lam}``."""
    for name, x in (("a", a), ("b", b), ("c", c), ("t", t)):
        _unit(name, x)
    if not lam > 0:
        raise InvalidParameter(f"lambda must be > 0, got {lam}")
    return a * math.exp(-t * lam) + b * math.exp(-(1 - t) * lam) - c * math.exp(-lam)


def minimize_f(a: float, b: float, c: float, lam: float) -> FMinResult:
    """Minimise ``f_lambda`` over [0, 1].

    ``f`` is convex in ``t`` with stationary point
    ``1/2 - ln(b/a) / (2 lam)``; the minimum sits at 1 when ``b/a <= e^-lam``,
    at 0 when ``b/a >= e^lam``, and at the stationary point otherwise.  With
    ``a = 0`` the ratio is undefined: ``f`` is then non-decreasing in ``t``
    and the result is labelled ``degenerate`` with ``t_star = 0``.
    """
    for name, x in (("a", a), ("b", b), ("c", c)):
        _unit(name, x)
    if not lam > 0:
        raise InvalidParameter(f"lambda must be > 0, got {lam}")
    if a == 0:
        return FMinResult(DEGENERATE, 0.0, f_lambda(a, b, c, lam, 0.0))
    ratio = b / a
    if ratio <= math.exp(-lam):
        label, t = MIN_AT_1, 1.0
    elif ratio >= math.exp(lam):
        label, t = MIN_AT_0, 0.0
    else:
        label, t = INTERIOR, 0.5 - math.log(ratio) / (2 * lam)
        t = min(max(t, 0.0), 1.0)
    return FMinResult(label, t, f_lambda(a, b, c, lam, t))


def bound_mid(lam: float, t: float) -> float:
    """Upper bound on ``P(o <-> t e)``, obtained by taking ``P(o <-> e) <= 1``."""
    if not lam > 0 or not 0 < t < 1:
        raise InvalidParameter(f"need lam > 0 and 0 < t < 1, got lam={lam}, t={t}")
    return math.exp(-lam * t) + math.exp(-lam * (1 - t)) - math.exp(-lam)


def bound_vertex(lam: float, d: int) -> float:
    """Lower bound on ``P(o <-> e)`` from the direct edge and the
    ``2(d-1)`` three-edge detours."""
    if not lam > 0 or d < 2:
        raise InvalidParameter(f"need lam > 0 and d >= 2, got lam={lam}, d={d}")
    return 1 - (1 - math.exp(-3 * lam)) ** (2 * (d - 1)) * (1 - math.exp(-lam))


def g_poly() -> IntPoly:
    tail = Z**10 + Z**9 + Z**8 + Z**7 + Z**6 - Z**4 - Z**3 - Z**2 - Z - 1
    return Z**11 + 2 * tail


def bound_gap_poly() -> IntPoly:
    """``1 - (1 - z^6)^2 (1 - z^2) - z (2 - z)`` with ``z = e^{-lam/2}``, d = 2."""
    return 1 - (1 - Z**6) ** 2 * (1 - Z**2) - Z * (2 - Z)


def g_identity_residual() -> IntPoly:
    """Zero exactly when the gap polynomial factors as ``z (z-1)^2 g(z)``."""
    return bound_gap_poly() - Z * (Z - 1) ** 2 * g_poly()


def z0_threshold(tol: float = 1e-12, search=(0.0, 1.0)) -> RootBracket:
    """Bracket of width ``<= tol`` around the largest root of ``g`` in (0, 1).

    ``g`` is positive on the whole interval above this root.
    """
    g = g_poly()
    grid = [search[0] + (search[1] - search[0]) * k / 1000 for k in range(1001)]
    lo = None
    for a, b in zip(grid, grid[1:]):
        if g(a) <= 0 < g(b) or g(a) >= 0 > g(b):
            lo = (a, b)
    if lo is None:
        raise InvalidParameter("g has no sign change on the search interval")
    return bracket_root(g, RootBracket(*lo), tol)


def g_sign_changes(lo: float, hi: float, points: int = 2001) -> int:
    from fractions import Fraction

    grid = [Fraction(lo) + (Fraction(hi) - Fraction(lo)) * k / (points - 1) for k in range(points)]
    return sign_changes(g_poly(), grid)


def theta_threshold(n: int) -> float:
    """``(1 - 2^{-1/(n-3)})^{1/2}``: above it the peak of ``P_n`` beats every middle vertex."""
    if n < 4:
        raise InvalidParameter(f"threshold needs n >= 4, got {n}")
    return math.sqrt(1 - 2 ** (-1 / (n - 3)))


def smallest_theta_n(beta: float, n_max: int = 10**6) -> int:
    """Smallest ``n >= 4`` with ``theta_threshold(n) <= beta``."""
    if not 0 < beta < 1:
        raise InvalidParameter(f"beta must lie in (0, 1), got {beta}")
    # threshold <= beta  <=>  n - 3 >= -1 / log2(1 - beta^2)
    n = max(4, 3 + math.ceil(-1 / math.log2(1 - beta * beta)) - 1)
    while theta_threshold(n) > beta:
        n += 1
        if n > n_max:
            raise InvalidParameter(f"no n <= {n_max} reaches beta={beta}")
    while n > 4 and theta_threshold(n - 1) <= beta:
        n -= 1
    return n


def p0(d: int) -> float:
    """``(2d(2d-1))^{-1/2}`` as printed for the small-p regime."""
    if d < 2:
        raise InvalidParameter(f"d must be >= 2, got {d}")
    return (2 * d * (2 * d - 1)) ** -0.5


def p0_path_bound(d: int) -> float:
    """Largest p with ``2d (2d-1)^2 p^3 <= p``, i.e. ``(2d)^{-1/2} / (2d-1)``."""
    if d < 2:
        raise InvalidParameter(f"d must be >= 2, got {d}")
    return (2 * d) ** -0.5 / (2 * d - 1)


P1 = 0.99


def lambda_of_p(p: float) -> float:
    if not 0 < p <= 1:
        raise InvalidParameter(f"p must lie in (0, 1], got {p}")
    return -math.log(p)


def p_of_lambda(lam: float) -> float:
    if not lam >= 0:
        raise InvalidParameter(f"lambda must be >= 0, got {lam}")
    return math.exp(-lam)


def edge_profile(lam: float, conditional: float, t: float) -> float:
    """``P(o <-> t e)`` from the conditional connection probability ``C``:
    ``e^{-t lam} + C (e^{-(1-t) lam} - e^{-lam})``."""
    return math.exp(-t * lam) + conditional * (math.exp(-(1 - t) * lam) - math.exp(-lam))
