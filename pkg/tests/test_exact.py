import itertools
import math
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from percmono.errors import BudgetExceeded, InvalidBracket, InvalidParameter
from percmono.exact import (RootBracket, isolate_root, log_ratio_h, relevant_edges,
                            theta_closed_form, two_terminal_poly)
from percmono.graph import Graph, glue, make_box, make_theta, make_tree_glued
from percmono.poly import IntPoly, bernstein_sum, poly_eval, poly_sub

DATA = Path(__file__).parent / "data"
P = IntPoly.x()


def oracle_poly(g, u, v):
    """Second enumeration: reversed subset order, networkx connectivity,
    sympy rational expansion."""
    p = sp.Symbol("p")
    m = g.n_edges
    total = sp.Integer(0)
    for states in reversed(list(itertools.product((0, 1), repeat=m))):
        G = nx.Graph()
        G.add_nodes_from(g.vertices)
        G.add_edges_from(e for e, s in zip(g.edges, states) if s)
        if nx.has_path(G, u, v):
            k = sum(states)
            total += p**k * (1 - p) ** (m - k)
    coeffs = sp.Poly(sp.expand(total), p).all_coeffs()[::-1] if total != 0 else []
    return IntPoly(int(c) for c in coeffs)


def test_poly_basics():
    a = IntPoly([1, 2, 0, 0])
    assert a.coeffs == (1, 2)
    assert IntPoly([0, 0]).is_zero() and IntPoly().coeffs == ()
    assert (1 - P) * (1 + P) == 1 - P**2
    assert poly_sub(P**2, P) == IntPoly([0, -1, 1])
    assert IntPoly.from_text("0 0 3 0 -3 0 1") == 1 - (1 - P**2) ** 3
    assert IntPoly().to_text() == "0"


def test_poly_eval_kinds():
    assert poly_eval(IntPoly(), 0.7) == 0
    q = IntPoly.from_text("0 0 3 0 -3 0 1")
    assert q(1) == 1
    assert q(Fraction(1, 2)) == Fraction(3, 4) - Fraction(3, 16) + Fraction(1, 64)
    assert isinstance(q(Fraction(1, 3)), Fraction)
    assert q(0.7) == pytest.approx(0.867349)


def test_bernstein_sum_matches_direct_expansion():
    counts, m = [1, 0, 3, 2], 3
    direct = sum((c * P**k * (1 - P) ** (m - k) for k, c in enumerate(counts)), IntPoly())
    assert bernstein_sum(counts, m) == direct


def test_theta4_peak_polynomial():
    assert two_terminal_poly(make_theta(4), 0, 4) == IntPoly([0, 0, 3, 0, -3, 0, 1])
    golden = IntPoly.from_text((DATA / "theta4_peak.poly").read_text())
    assert theta_closed_form(4, "peak") == golden


def test_single_edge():
    g = Graph((0, 1), ((0, 1),))
    assert two_terminal_poly(g, 0, 1) == P


def test_theta6_middle_matches_formula():
    expected = P + (1 - P) * P * (1 - (1 - P**2) ** 4)
    assert two_terminal_poly(make_theta(6), 0, 1) == expected


def test_theta3_middle_closed_form():
    assert theta_closed_form(3, "middle") == IntPoly([0, 1, 0, 1, -1])
    assert theta_closed_form(3, "middle").to_text() == (DATA / "theta3_middle.poly").read_text().strip()


@pytest.mark.parametrize("n", range(3, 11))
def test_closed_forms_equal_enumeration(n):
    g = make_theta(n)
    assert theta_closed_form(n, "peak") == two_terminal_poly(g, 0, n)
    for i in range(1, n):
        assert theta_closed_form(n, "middle") == two_terminal_poly(g, 0, i)


def test_theta_closed_form_errors():
    with pytest.raises(InvalidParameter):
        theta_closed_form(2, "peak")
    with pytest.raises(InvalidParameter):
        theta_closed_form(5, "side")


def test_golden_ratio_factorisation():
    diff = theta_closed_form(4, "peak") - theta_closed_form(4, "middle")
    # p (p-1)^2 (p + (1-sqrt5)/2)(p + (1+sqrt5)/2) = p (p-1)^2 (p^2 + p - 1)
    assert diff == P * (P - 1) ** 2 * (P**2 + P - 1)
    s5 = math.sqrt(5)
    for x in (0.1, 0.3, 0.55, 0.8, 0.95):
        assert diff(x) == pytest.approx(x * (x - 1) ** 2 * (x + (1 - s5) / 2) * (x + (1 + s5) / 2),
                                        abs=1e-14)


def test_isolate_root_golden():
    diff = theta_closed_form(4, "middle") - theta_closed_form(4, "peak")
    root = isolate_root(diff, RootBracket(0.5, 0.7), tol=1e-12)
    assert abs(root - (math.sqrt(5) - 1) / 2) < 1e-10


def test_isolate_root_linear():
    assert isolate_root(P * 2 - 1, RootBracket(0, 1), tol=1e-12) == 0.5


def test_isolate_root_requires_sign_change():
    with pytest.raises(InvalidBracket):
        isolate_root(P * P + 1, RootBracket(0, 1))
    with pytest.raises(InvalidParameter):
        RootBracket(0.7, 0.5)


def test_enumeration_bound():
    g = make_box(2, 3)
    assert g.n_edges > 28
    with pytest.raises(BudgetExceeded, match="enumeration bound"):
        two_terminal_poly(g, g.origin, g.vertex("e"))


def test_forced_closed_is_deletion():
    g = make_box(2, 2)
    o, e = g.origin, g.vertex("e")
    via_arg = two_terminal_poly(g, o, e, [(o, e)])
    cut = make_box(2, 2, remove_origin_edge=True)
    assert via_arg == two_terminal_poly(cut, o, e)
    golden = IntPoly.from_text((DATA / "box_2_2_cut_o_e.poly").read_text())
    assert via_arg == golden
    # conditioning identity: P(o<->e) = p + (1 - p) F
    assert two_terminal_poly(g, o, e) == P + (1 - P) * via_arg


def test_worker_count_does_not_change_result():
    g = make_box(2, 2, remove_origin_edge=True)
    o, e = g.origin, g.vertex("e")
    assert two_terminal_poly(g, o, e, workers=1) == two_terminal_poly(g, o, e, workers=3)


def test_same_terminal_is_certain():
    assert two_terminal_poly(make_theta(4), 2, 2) == IntPoly([1])


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 6))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=9))
    u = draw(st.integers(0, n - 1))
    v = draw(st.integers(0, n - 1).filter(lambda x: x != u))
    return Graph(tuple(range(n)), tuple(edges)), u, v


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_enumeration_matches_independent_oracle(case):
    g, u, v = case
    assert two_terminal_poly(g, u, v) == oracle_poly(g, u, v)


@given(small_graphs(), st.fractions(0, 1), st.fractions(0, 1))
@settings(max_examples=60, deadline=None)
def test_connection_polynomial_is_monotone_and_bounded(case, x, y):
    g, u, v = case
    q = two_terminal_poly(g, u, v)
    lo, hi = sorted((x, y))
    assert 0 <= q(lo) <= q(hi) <= 1
    assert q(0) == 0


@given(small_graphs())
@settings(max_examples=40, deadline=None)
def test_complement_sums_to_one(case):
    g, u, v = case
    q = two_terminal_poly(g, u, v)
    m = g.n_edges
    # count the complementary event directly
    disconnected = [0] * (m + 1)
    for states in itertools.product((0, 1), repeat=m):
        G = nx.Graph()
        G.add_nodes_from(g.vertices)
        G.add_edges_from(e for e, s in zip(g.edges, states) if s)
        if not nx.has_path(G, u, v):
            disconnected[sum(states)] += 1
    assert q + bernstein_sum(disconnected, m) == 1


def test_cut_vertex_factorisation():
    a = make_theta(4)
    g = glue(a, 4, make_theta(3), 0)
    # 0 .. 4 in the first copy, 4 .. far peak of the second copy
    far = g.n_vertices - 1
    assert two_terminal_poly(g, 0, far) == two_terminal_poly(g, 0, 4) * two_terminal_poly(g, 4, far)
    assert two_terminal_poly(g, 0, far) == theta_closed_form(4, "peak") * theta_closed_form(3, "peak")


def test_tree_glued_within_copy_polynomials():
    g = make_tree_glued(4, 2)
    assert len(relevant_edges(g, 0, 4)) == 6
    assert two_terminal_poly(g, 0, 4, prune=True) == theta_closed_form(4, "peak")
    assert two_terminal_poly(g, 0, 1, prune=True) == theta_closed_form(4, "middle")


def test_pruning_agrees_with_full_enumeration():
    g = glue(make_theta(4), 4, make_theta(4), 1)
    for u, v in [(0, 4), (0, 1), (0, g.n_vertices - 1), (2, 6)]:
        assert two_terminal_poly(g, u, v, prune=True) == two_terminal_poly(g, u, v)


@pytest.mark.parametrize("n", range(5, 12))
def test_peak_beats_middle_above_threshold(n):
    thr = math.sqrt(1 - 2 ** (-1 / (n - 3)))
    peak, middle = theta_closed_form(n, "peak"), theta_closed_form(n, "middle")
    grid = [thr + (1 - thr) * k / 50 for k in range(50)]
    assert all(peak(Fraction(x)) > middle(Fraction(x)) for x in grid)
    # the lower bound on the difference used to derive the threshold
    for x in grid:
        x = Fraction(x)
        assert peak(x) - middle(x) >= (1 - x) ** 2 * (1 - 2 * (1 - x * x) ** (n - 3))


def test_peak_minus_middle_closed_form():
    for n in range(4, 9):
        diff = theta_closed_form(n, "peak") - theta_closed_form(n, "middle")
        assert diff == (1 - P) * (1 - P - (1 - P**2) ** (n - 2))


def test_log_ratio_examples():
    single = Graph((0, 1), ((0, 1),))
    path = Graph((0, 1, 2), ((0, 1), (1, 2)))
    for p in (0.1, 0.5, 0.9):
        assert log_ratio_h(single, 0, 1, (), p) == pytest.approx(1.0, abs=1e-12)
        assert log_ratio_h(path, 0, 2, (), p) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(InvalidParameter):
        log_ratio_h(single, 0, 1, (), 1.0)
    with pytest.raises(InvalidParameter):
        log_ratio_h(single, 0, 0, (), 0.5)


def test_log_ratio_non_increasing_on_box():
    g = make_box(2, 2)
    o, e = g.origin, g.vertex("e")
    hs = [log_ratio_h(g, o, e, [(o, e)], k / 20) for k in range(1, 20)]
    assert all(b <= a + 1e-12 for a, b in zip(hs, hs[1:]))
    assert hs[0] > 1 > hs[-1]
