import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from smean.geometry import Ellipsoid
from smean.phantom import Phantom, RadialBump, bump_profile


def test_eval_examples():
    ph = Phantom([RadialBump((0.1, 0.2), 0.3)])
    assert ph.eval([0.1, 0.2]) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert ph.eval([0.1 + 0.15, 0.2]) == pytest.approx(math.exp(-4 / 3), rel=1e-14)
    assert ph.eval([0.9, 0.2]) == 0.0


def test_bump_profile_is_compact():
    t = np.linspace(0, 2, 101)
    v = bump_profile(t, 1.0)
    assert np.all(v[t >= 1.0] == 0.0)
    assert np.all(v[t < 1.0] > 0.0)


def test_support_margin_rule_is_enforced(ellipse):
    with pytest.raises(ValueError, match="support-margin"):
        Phantom([RadialBump((0.8, 0.0), 0.25)], ellipse)
    Phantom([RadialBump((0.5, 0.0), 0.25)], ellipse)


def test_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        Phantom([RadialBump((0.0, 0.0), 0.1), RadialBump((0.0, 0.0, 0.0), 0.1)])


def test_mean_at_center_is_profile():
    ph = Phantom([RadialBump((0.1, -0.2, 0.05), 0.3, 2.0)])
    r = np.array([0.05, 0.1, 0.2, 0.29])
    np.testing.assert_allclose(ph.analytic_mean([0.1, -0.2, 0.05], r),
                               2.0 * bump_profile(r, 0.3), rtol=1e-13)


def test_mean_vanishes_beyond_support():
    ph = Phantom([RadialBump((0.0, 0.0), 0.25)])
    z = np.array([0.3, 0.0])
    assert ph.analytic_mean(z, 0.3 + 0.25 + 1e-3) == 0.0
    assert ph.analytic_mean(z, 0.04) == 0.0


def _circle_mean(rho, r, rho0):
    """(1/2 pi) int_0^{2 pi} phi(|z + r omega - c|) d theta with adaptive quadrature."""
    def f(theta):
        d = math.sqrt(rho * rho + r * r - 2 * rho * r * math.cos(theta))
        return bump_profile(d, rho0)
    cos_max = (rho * rho + r * r - rho0 * rho0) / (2 * rho * r)
    theta_max = math.acos(max(-1.0, min(1.0, cos_max)))
    val, _ = quad(f, 0.0, theta_max, epsabs=1e-14, epsrel=1e-12, limit=1000)
    return val / math.pi


def test_mean_matches_adaptive_oracle_n2():
    ph = Phantom([RadialBump((0.0, 0.0), 0.25)])
    got = ph.analytic_mean([0.3, 0.0], 0.4)
    assert got == pytest.approx(_circle_mean(0.3, 0.4, 0.25), abs=1e-10)


def _sphere_mean_3d(rho, r, rho0):
    """(1/2) int_0^pi sin t phi(...) dt (zonal form of the 2-sphere average)."""
    def f(t):
        d = math.sqrt(rho * rho + r * r - 2 * rho * r * math.cos(t))
        return 0.5 * math.sin(t) * bump_profile(d, rho0)
    val, _ = quad(f, 0.0, math.pi, epsabs=1e-15, epsrel=1e-13, limit=1000)
    return val


@pytest.mark.parametrize("rho, r", [(0.3, 0.2), (0.1, 0.15), (0.25, 0.4)])
def test_mean_matches_oracle_n3(rho, r):
    ph = Phantom([RadialBump((0.0, 0.0, 0.0), 0.25)])
    got = ph.analytic_mean([rho, 0.0, 0.0], r)
    assert got == pytest.approx(_sphere_mean_3d(rho, r, 0.25), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.6), st.floats(0.01, 0.9), st.integers(2, 5))
def test_mean_value_bound(rho, r, n):
    ph = Phantom([RadialBump((0.0,) * n, 0.25, -1.5)])
    z = np.zeros(n)
    z[0] = rho
    assert abs(ph.analytic_mean(z, r)) <= 1.5 * math.exp(-1.0) + 1e-15


def test_mean_tends_to_value_as_r_shrinks():
    ph = Phantom([RadialBump((0.0, 0.0, 0.0), 0.3)])
    z = np.array([0.1, 0.05, 0.0])
    m = ph.analytic_mean(z, np.array([1e-2, 1e-3]))
    assert abs(m[1] - ph.eval(z)) < abs(m[0] - ph.eval(z)) + 1e-15
    assert m[1] == pytest.approx(ph.eval(z), rel=1e-4)


def test_linear_helpers():
    g = Ellipsoid((1.0, 0.7))
    a = Phantom([RadialBump((0.2, 0.0), 0.2)], g)
    b = Phantom([RadialBump((-0.2, 0.1), 0.2, 2.0)], g)
    x = np.array([[0.2, 0.0], [-0.15, 0.1]])
    np.testing.assert_allclose((a + b.scaled(-0.5)).eval(x), a.eval(x) - 0.5 * b.eval(x))
    assert Phantom.zero(3).eval([0.0, 0.0, 0.0]) == 0.0
    assert a.sup_norm == pytest.approx(math.exp(-1))
