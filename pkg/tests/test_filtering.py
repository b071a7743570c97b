import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smean.filtering import derivative_uniform, fd_weights, radial_filter, resample_points
from smean.forward import MeanData, RadialGrid
from smean.geometry import Ellipsoid, build_sphere_quadrature


def _data(n, K, func, J_order=4, axes=None):
    g = Ellipsoid(axes or tuple(1.0 - 0.1 * i for i in range(n)))
    q = build_sphere_quadrature(n, J_order)
    radii = RadialGrid.staggered_for(g, K)
    r = radii.r_values
    values = np.tile(func(r), (len(q), 1))
    return MeanData(g, q, radii, values)


def test_order_zero_is_multiplication():
    data = _data(3, 40, lambda r: np.cos(r))
    out = radial_filter(data, 0)
    np.testing.assert_array_equal(out.values, data.values * data.radii.r_values[None, :])
    data2 = _data(2, 40, lambda r: np.cos(r))
    np.testing.assert_array_equal(radial_filter(data2, 0).values, data2.values)


def test_constant_data_n3():
    data = _data(3, 20, lambda r: np.full_like(r, 2.5))
    out = radial_filter(data, 0).values
    np.testing.assert_allclose(out, np.broadcast_to(2.5 * data.radii.r_values, out.shape))


def test_n4_second_derivative_of_rho_squared():
    # r^{n-2} g = r^4 = rho^2, D_r^2 rho^2 = 2
    data = _data(4, 64, lambda r: r**2)
    out = radial_filter(data, 2)
    np.testing.assert_allclose(out.values, 2.0, atol=1e-8)


@pytest.mark.parametrize("m, poly", [(1, lambda p: p**3 - p), (2, lambda p: p**3 + 2 * p**2),
                                     (1, lambda p: 0.3 * p**2 + 1.0)])
def test_exact_on_low_degree_polynomials_in_rho(m, poly):
    data = _data(2, 80, lambda r: poly(r * r))
    out = radial_filter(data, m)
    rho = data.radii.r_values ** 2
    d = np.polynomial.Polynomial(poly(np.polynomial.Polynomial([0, 1])).coef).deriv(m)(rho)
    np.testing.assert_allclose(out.values[0], d, atol=1e-8)


def test_boundary_margin_is_flagged():
    data = _data(4, 64, lambda r: r**2)
    out = radial_filter(data, 2)
    assert out.margin[0] and out.margin[-1]
    assert not out.margin[len(out.margin) // 2]


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 3))
def test_linearity(alpha, beta, m):
    d1 = _data(4, 48, lambda r: np.sin(3 * r))
    d2 = _data(4, 48, lambda r: np.exp(-r))
    combo = d1.with_values(alpha * d1.values + beta * d2.values)
    lhs = radial_filter(combo, m).values
    rhs = alpha * radial_filter(d1, m).values + beta * radial_filter(d2, m).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * max(1.0, np.abs(rhs).max()))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_second_order_convergence(m):
    def func(r):
        return np.exp(-(r * r - 1.0) ** 2)

    errors = []
    for K in (200, 400):
        data = _data(2, K, func)
        out = radial_filter(data, m)
        rho = data.radii.r_values ** 2
        # exact m-th rho-derivative of exp(-(rho - 1)^2) via Hermite polynomials
        x = rho - 1.0
        exact = (-1) ** m * np.polynomial.hermite.hermval(x, [0] * m + [1]) * np.exp(-x * x)
        interior = ~out.margin
        errors.append(np.max(np.abs(out.values[0, interior] - exact[interior])))
    assert errors[0] / errors[1] >= 3.5


def test_too_coarse_grid_raises():
    data = _data(2, 4, lambda r: r)
    with pytest.raises(ValueError):
        radial_filter(data, 4)


def test_rejects_negative_order():
    with pytest.raises(ValueError):
        radial_filter(_data(2, 20, lambda r: r), -1)


def test_fd_weights_and_stencil():
    np.testing.assert_allclose(fd_weights([-1, 0, 1], 2), [1, -2, 1], atol=1e-13)
    x = np.linspace(0, 1, 21)
    d, boundary = derivative_uniform(x**2, x[1] - x[0], 2)
    np.testing.assert_allclose(d, 2.0, atol=1e-9)
    assert boundary[0] and boundary[-1] and not boundary[10]
    assert resample_points(2) == 4 and resample_points(3) >= 6
