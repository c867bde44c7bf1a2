import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from percmono.analysis import (DEGENERATE, INTERIOR, MIN_AT_0, MIN_AT_1, Z, bound_gap_poly,
                               bound_mid, bound_vertex, edge_profile, f_lambda, g_identity_residual,
                               g_poly, g_sign_changes, lambda_of_p, minimize_f, p0, p0_path_bound,
                               p_of_lambda, smallest_theta_n, theta_threshold, z0_threshold)
from percmono.errors import InvalidParameter

unit = st.floats(0, 1)


def test_f_lambda_examples():
    assert f_lambda(1, 1, 1, 1.0, 0.5) == pytest.approx(2 * math.exp(-0.5) - math.exp(-1))
    assert f_lambda(1, 0, 0, 2.0, 0.0) == 1.0
    with pytest.raises(InvalidParameter):
        f_lambda(1.2, 0, 0, 1.0, 0.5)
    with pytest.raises(InvalidParameter):
        f_lambda(1, 1, 1, 0.0, 0.5)


def test_minimize_cases():
    assert minimize_f(1, 1, 1, 1.0).case_label == INTERIOR
    assert minimize_f(1, 1, 1, 1.0).t_star == pytest.approx(0.5)
    assert minimize_f(1, 0.01, 0.5, 1.0).case_label == MIN_AT_1
    assert minimize_f(0.01, 1, 0.5, 1.0).case_label == MIN_AT_0
    res = minimize_f(0, 0.5, 0.5, 1.0)
    assert res.case_label == DEGENERATE and res.t_star == 0.0
    with pytest.raises(InvalidParameter):
        minimize_f(-0.1, 0.5, 0.5, 1.0)


@given(unit, unit, unit, st.floats(0.01, 10))
@settings(max_examples=300)
def test_minimizer_beats_grid(a, b, c, lam):
    res = minimize_f(a, b, c, lam)
    grid = min(f_lambda(a, b, c, lam, k / 2000) for k in range(2001))
    assert res.value <= grid + 1e-12
    assert res.value == pytest.approx(f_lambda(a, b, c, lam, res.t_star))


def test_bounds():
    lam = 0.02
    assert bound_mid(lam, 0.5) == pytest.approx(2 * math.exp(-0.01) - math.exp(-0.02))
    assert bound_vertex(lam, 2) > bound_mid(lam, 0.5)
    assert bound_vertex(1.0, 3) > bound_vertex(1.0, 2)
    with pytest.raises(InvalidParameter):
        bound_mid(lam, 1.0)
    with pytest.raises(InvalidParameter):
        bound_vertex(lam, 1)


def test_g_polynomial_identity():
    assert g_identity_residual().is_zero()
    assert g_poly().coeffs == (-2, -2, -2, -2, -2, 0, 2, 2, 2, 2, 2, 1)
    assert g_poly()(1) == 1


def test_z0_bracket():
    br = z0_threshold(1e-12)
    assert br.width <= 1e-12
    assert 0.9849 < br.lo <= br.hi < 0.9850
    assert g_poly()(Fraction(br.lo)) < 0 < g_poly()(Fraction(br.hi))
    assert g_sign_changes(0.9, 1.0) == 1
    assert g_sign_changes(br.hi, 1.0) == 0
    lam0 = -2 * math.log(br.hi)
    assert 0.030 < lam0 < 0.031


@given(st.floats(0.9851, 0.9999))
def test_gap_positive_above_z0(z):
    assert bound_gap_poly()(z) > 0


@given(st.floats(0.001, 0.03))
def test_vertex_bound_beats_mid_bound_below_lambda0(lam):
    assert bound_vertex(lam, 2) > bound_mid(lam, 0.5)


def test_theta_threshold_decreasing():
    values = [theta_threshold(n) for n in range(4, 40)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert theta_threshold(4) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(InvalidParameter):
        theta_threshold(3)


@pytest.mark.parametrize("beta,n", [(0.8, 4), (0.5, 6), (0.3, 11), (0.1, 72)])
def test_smallest_theta_n(beta, n):
    assert smallest_theta_n(beta) == n
    assert theta_threshold(n) <= beta
    assert n == 4 or theta_threshold(n - 1) > beta


def test_p0_constants():
    assert p0(2) == pytest.approx(12**-0.5)
    assert p0_path_bound(2) == pytest.approx(1 / 6)
    for d in range(2, 6):
        p = p0_path_bound(d)
        assert 2 * d * (2 * d - 1) ** 2 * p**3 == pytest.approx(p)


@given(st.floats(1e-6, 1))
def test_lambda_p_inverse(p):
    assert p_of_lambda(lambda_of_p(p)) == pytest.approx(p)


def test_edge_profile_endpoints():
    assert edge_profile(1.0, 0.3, 0.0) == pytest.approx(1.0)
    assert edge_profile(1.0, 0.3, 1.0) == pytest.approx(math.exp(-1) + 0.3 * (1 - math.exp(-1)))


def test_gap_poly_at_one():
    assert bound_gap_poly()(1) == 0
    assert (Z - 1) ** 2 * Z * g_poly() == bound_gap_poly()
