"""Ellipsoid geometry, unit-sphere quadrature and dimension constants."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, roots_jacobi

__all__ = [
    "Ellipsoid",
    "SphereQuadrature",
    "sphere_surface_area",
    "reconstruction_constant",
    "build_sphere_quadrature",
    "gegenbauer_rule",
    "fundamental_solution",
    "fundamental_solution_eval",
]


def sphere_surface_area(n: int) -> float:
    """Total measure of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Gamma(n/2)."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {n!r}")
    return float(2.0 * math.exp(0.5 * n * math.log(math.pi) - gammaln(0.5 * n)))


def reconstruction_constant(n: int) -> float:
    """Normalising constant c_n of the back-projection formula for dimension ``n``.

    Even n: (-1)^{(n-2)/2} omega_{n-2} pi (n-2)! 2^{2-n}.
    Odd n:  (-1)^{(n-1)/2} omega_{n-2} (n-2)! 2^{3-n}.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    base = sphere_surface_area(n - 1) * math.factorial(n - 2)
    if n % 2 == 0:
        return (-1) ** ((n - 2) // 2) * base * math.pi * 2.0 ** (2 - n)
    return (-1) ** ((n - 1) // 2) * base * 2.0 ** (3 - n)


@dataclass(frozen=True)
class Ellipsoid:
    """Solid ellipsoid ``sum x_i^2 / a_i^2 < 1`` with axis-aligned semi-axes."""

    semi_axes: tuple[float, ...]

    def __post_init__(self):
        axes = tuple(float(a) for a in np.atleast_1d(self.semi_axes))
        if len(axes) < 2:
            raise ValueError("an ellipsoid needs at least two semi-axes (n >= 2)")
        if not all(np.isfinite(a) and a > 0 for a in axes):
            raise ValueError(f"semi-axes must be finite and positive, got {axes}")
        object.__setattr__(self, "semi_axes", axes)

    @property
    def n(self) -> int:
        return len(self.semi_axes)

    @property
    def axes(self) -> np.ndarray:
        return np.asarray(self.semi_axes)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.axes)

    @property
    def det(self) -> float:
        return float(np.prod(self.axes))

    @property
    def diameter(self) -> float:
        return 2.0 * max(self.semi_axes)

    def normalized_radius(self, x) -> np.ndarray:
        """|A^{-1} x| for points stacked along the last axis."""
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x / self.axes, axis=-1)

    def contains(self, x) -> np.ndarray | bool:
        r = self.normalized_radius(x)
        return bool(r < 1.0) if np.ndim(r) == 0 else r < 1.0

    def boundary_points(self, sigma) -> np.ndarray:
        """Map unit vectors sigma to the boundary points A sigma."""
        return np.asarray(sigma, dtype=float) * self.axes


@dataclass(frozen=True)
class SphereQuadrature:
    """Product quadrature on S^{n-1}.

    ``degree`` is the total polynomial degree integrated exactly;
    ``requested_degree``/``sufficient`` record whether a caller-requested
    exactness could be met with the given order.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    degree: int
    requested_degree: int | None = None
    sufficient: bool = True
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, func) -> float:
        """Quadrature sum of ``func`` evaluated on the (J, n) node array."""
        values = np.asarray(func(self.nodes), dtype=float)
        return float(self.weights @ values)


def gegenbauer_rule(num_points: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes/weights on [-1, 1] for the weight (1 - t^2)^{(n-3)/2}.

    Exact for polynomials of degree ``2 * num_points - 1``.
    """
    if n < 2:
        raise ValueError("weight (1-t^2)^{(n-3)/2} requires n >= 2")
    beta = 0.5 * (n - 3)
    t, w = roots_jacobi(int(num_points), beta, beta)
    return np.asarray(t), np.asarray(w)


def build_sphere_quadrature(n: int, order: int, degree: int | None = None) -> SphereQuadrature:
    """Recursive polar product rule on S^{n-1}.

    The circle uses ``order`` equispaced nodes (exact for trigonometric
    polynomials of degree < order).  Each further dimension adds a polar
    variable t integrated with ``ceil(order / 2)`` Gauss nodes for the weight
    (1 - t^2)^{(k-3)/2}, so the whole rule is exact up to degree ``order - 1``.

    Parameters
    ----------
    n : int
        Ambient dimension (sphere S^{n-1}).
    order : int
        Number of circle nodes; sets the exactness degree ``order - 1``.
    degree : int, optional
        Exactness required by the caller.  When ``order`` is too small the
        returned rule carries ``sufficient=False`` and a warning is issued.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    if int(order) != order or order < 2:
        raise ValueError(f"order must be an integer >= 2, got {order!r}")
    n, order = int(n), int(order)

    theta = 2.0 * np.pi * np.arange(order) / order
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(order, 2.0 * np.pi / order)

    n_polar = (order + 1) // 2
    for k in range(3, n + 1):
        t, wt = gegenbauer_rule(n_polar, k)
        s = np.sqrt(1.0 - t * t)
        nodes = np.concatenate(
            [np.column_stack([np.full(len(weights), ti), si * nodes]) for ti, si in zip(t, s)]
        )
        weights = np.concatenate([wti * weights for wti in wt])

    exact = order - 1
    sufficient = degree is None or degree <= exact
    if not sufficient:
        warnings.warn(
            f"sphere quadrature of order {order} is exact to degree {exact} < requested {degree}",
            RuntimeWarning,
            stacklevel=2,
        )
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereQuadrature(
        n=n,
        nodes=nodes,
        weights=weights,
        order=order,
        degree=exact,
        requested_degree=degree,
        sufficient=sufficient,
        metadata={"circle_nodes": order, "polar_nodes": n_polar if n > 2 else 0},
    )


def fundamental_solution(n: int, dist) -> np.ndarray:
    """G_n as a function of |x - y| (vectorised); +-inf at zero distance."""
    dist = np.asarray(dist, dtype=float)
    with np.errstate(divide="ignore"):
        if n == 2:
            return np.log(dist) / (2.0 * np.pi)
        return dist ** (2 - n) / (sphere_surface_area(n) * (2 - n))


def fundamental_solution_eval(n: int, x, y) -> float:
    """Fundamental solution of the Laplacian, G_n(x, y).

    Raises ``ZeroDivisionError`` at the singularity x == y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (n,) or y.shape != (n,):
        raise ValueError(f"expected points of shape ({n},)")
    dist = float(np.linalg.norm(x - y))
    if dist == 0.0:
        raise ZeroDivisionError("fundamental solution is singular at x == y")
    return float(fundamental_solution(n, dist))
