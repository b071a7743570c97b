import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from smean.geometry import (
    Ellipsoid,
    build_sphere_quadrature,
    fundamental_solution,
    fundamental_solution_eval,
    gegenbauer_rule,
    reconstruction_constant,
    sphere_surface_area,
)


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi),
                                         (4, 2 * math.pi**2), (5, 8 * math.pi**2 / 3)])
def test_sphere_surface_area(n, expected):
    assert sphere_surface_area(n) == pytest.approx(expected, rel=1e-14)


def test_sphere_surface_area_rejects_bad_dimension():
    with pytest.raises(ValueError):
        sphere_surface_area(0)


@pytest.mark.parametrize("n, expected", [(2, 2 * math.pi), (3, -2 * math.pi),
                                         (4, -2 * math.pi**2), (5, 3 * math.pi**2)])
def test_reconstruction_constant(n, expected):
    assert reconstruction_constant(n) == pytest.approx(expected, rel=1e-14)


def test_ellipsoid_basics():
    g = Ellipsoid((1.0, 0.7, 0.5))
    assert g.n == 3
    assert g.det == pytest.approx(0.35)
    assert g.diameter == 2.0
    np.testing.assert_array_equal(g.matrix, np.diag([1.0, 0.7, 0.5]))
    assert g.contains([0.0, 0.0, 0.49])
    assert not g.contains([0.0, 0.0, 0.5])
    sigma = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
    np.testing.assert_allclose(g.normalized_radius(g.boundary_points(sigma)), 1.0)


@pytest.mark.parametrize("axes", [(1.0,), (1.0, 0.0), (1.0, -2.0), (1.0, np.inf)])
def test_ellipsoid_rejects_invalid_axes(axes):
    with pytest.raises(ValueError):
        Ellipsoid(axes)


def test_circle_rule_is_equispaced():
    q = build_sphere_quadrature(2, 8)
    assert len(q) == 8
    np.testing.assert_allclose(q.weights, math.pi / 4, rtol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(q.nodes, axis=1), 1.0, atol=1e-15)
    assert q.weights.sum() == pytest.approx(2 * math.pi, rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_weights_sum_to_sphere_area_and_positive(n):
    q = build_sphere_quadrature(n, 10)
    assert q.weights.sum() == pytest.approx(sphere_surface_area(n), rel=1e-12)
    assert np.all(q.weights > 0)
    np.testing.assert_allclose(np.linalg.norm(q.nodes, axis=1), 1.0, atol=1e-14)


def test_second_moment_n3():
    q = build_sphere_quadrature(3, 8)
    assert q.integrate(lambda s: s[:, 0] ** 2) == pytest.approx(4 * math.pi / 3, rel=1e-10)


def _moment(alpha):
    """Exact integral of sigma^alpha over S^{n-1}."""
    alpha = np.asarray(alpha)
    if np.any(alpha % 2):
        return 0.0
    b = (alpha + 1) / 2.0
    return 2.0 * np.prod(gamma(b)) / gamma(b.sum())


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(0, 4), min_size=n, max_size=n))))
def test_monomial_exactness(case):
    n, alpha = case
    order = 10
    q = build_sphere_quadrature(n, order)
    if sum(alpha) > q.degree:
        return
    value = q.integrate(lambda s: np.prod(s ** np.asarray(alpha), axis=1))
    exact = _moment(alpha)
    assert abs(value - exact) <= 1e-10 * max(1.0, abs(exact))


def test_insufficient_order_is_reported():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        q = build_sphere_quadrature(3, 4, degree=10)
    assert not q.sufficient
    assert q.requested_degree == 10
    assert any("requested" in str(w.message) for w in caught)


def test_quadrature_arrays_are_read_only():
    q = build_sphere_quadrature(3, 6)
    with pytest.raises(ValueError):
        q.weights[0] = 1.0


def test_gegenbauer_rule_integrates_weight():
    t, w = gegenbauer_rule(6, 5)
    # int (1 - t^2) t^2 dt = 4/15
    assert np.sum(w * t**2) == pytest.approx(4 / 15, rel=1e-13)


def test_fundamental_solution_examples():
    assert fundamental_solution_eval(2, [0.0, 0.0], [1.0, 0.0]) == pytest.approx(0.0, abs=1e-16)
    assert fundamental_solution_eval(3, [0, 0, 0], [0, 1, 0]) == pytest.approx(-1 / (4 * math.pi))
    x = np.zeros(5)
    y = np.array([2.0, 0, 0, 0, 0])
    assert fundamental_solution_eval(5, x, y) == pytest.approx(-1 / (64 * math.pi**2), rel=1e-13)


def test_fundamental_solution_singular_and_symmetric(rng):
    with pytest.raises(ZeroDivisionError):
        fundamental_solution_eval(3, [0.1, 0.2, 0.3], [0.1, 0.2, 0.3])
    for n in (2, 3, 4):
        x, y = rng.normal(size=(2, n))
        assert fundamental_solution_eval(n, x, y) == fundamental_solution_eval(n, y, x)


@pytest.mark.parametrize("n", [2, 3])
def test_fundamental_solution_is_harmonic(n):
    y = np.zeros(n)
    x = np.full(n, 0.6 / math.sqrt(n)) + 0.05
    residuals = []
    for h in (1e-2, 5e-3):
        lap = -2 * n * fundamental_solution(n, np.linalg.norm(x - y))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            lap += fundamental_solution(n, np.linalg.norm(x + e - y))
            lap += fundamental_solution(n, np.linalg.norm(x - e - y))
        residuals.append(abs(lap / h**2))
    assert residuals[1] < residuals[0]
    assert residuals[0] / residuals[1] == pytest.approx(4.0, rel=0.15)
