"""Radial filter D_r^m r^{n-2} applied to spherical-mean data.

D_r = (1/2r) d/dr is the derivative with respect to rho = r^2, so the filter
resamples onto a uniform rho grid, differentiates there and resamples back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import cubic_uniform_many, lagrange_interp
from .forward import MeanData, RadialGrid
from .geometry import Ellipsoid, SphereQuadrature

__all__ = ["FilteredData", "radial_filter", "resample_points", "fd_weights", "derivative_uniform"]


@dataclass
class FilteredData:
    """q[j, k] = (D_r^m r^{n-2} Mf)(A sigma_j, r_k).

    ``margin`` is the set of radial indices whose value depends on a
    one-sided difference stencil near either end of the rho grid.
    """

    geometry: Ellipsoid
    directions: SphereQuadrature
    radii: RadialGrid
    values: np.ndarray
    order: int
    margin: np.ndarray

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def centers(self) -> np.ndarray:
        return self.geometry.boundary_points(self.directions.nodes)


def fd_weights(offsets, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative on integer ``offsets`` (unit spacing)."""
    offsets = np.asarray(offsets, dtype=float)
    p = np.arange(offsets.size)
    vander = offsets[None, :] ** p[:, None]
    rhs = np.zeros(offsets.size)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(vander, rhs)


def derivative_uniform(values, dx: float, m: int):
    """m-th derivative along the last axis by a centred second-order stencil.

    Interior nodes use the narrowest symmetric second-order stencil that is
    also exact on cubics (so odd m gets at least five points); the ``half``
    nodes at each end use a one-sided window of ``width + 1`` points so
    they stay second order.  Returns ``(derivative, boundary_mask)``.
    """
    values = np.asarray(values, dtype=float)
    half = (m + 1) // 2
    if m % 2:
        half = max(half, 2)
    width = 2 * half + 1
    P = values.shape[-1]
    if width + 1 > P:
        raise ValueError(f"grid of {P} points too coarse for a derivative of order {m}")
    w_center = fd_weights(np.arange(-half, half + 1), m)
    out = np.zeros_like(values)
    for a, w in zip(range(-half, half + 1), w_center):
        out[..., half:P - half] += w * values[..., half + a:P - half + a]
    boundary = np.zeros(P, dtype=bool)
    for i in list(range(half)) + list(range(P - half, P)):
        start = 0 if i < half else P - width - 1
        w = fd_weights(np.arange(start, start + width + 1) - i, m)
        out[..., i] = values[..., start:start + width + 1] @ w
        boundary[i] = True
    return out / dx**m, boundary


def resample_points(m: int) -> int:
    """Stencil size of the r -> rho resampling for derivative order m."""
    return 4 if m <= 2 else 2 * math.ceil((m + 2) / 2)


def radial_filter(data: MeanData, m: int, oversample: float = 1.0) -> FilteredData:
    """Apply D_r^m r^{n-2} to every direction of ``data``.

    For ``m == 0`` this is the plain multiplication by r^{n-2}.  Otherwise
    r^{n-2} g is interpolated onto ``oversample * K`` uniform points in
    rho = r^2, differentiated m times there and cubically resampled at
    rho = r_k^2.

    The first resampling is cubic for m <= 2.  Its O(h^4) error is divided
    by h^m when differencing, so for m >= 3 the stencil grows to
    ``2 * ceil((m + 2) / 2)`` points to keep the filter second order.
    """
    if int(m) != m or m < 0:
        raise ValueError(f"derivative order must be a non-negative integer, got {m!r}")
    m = int(m)
    n = data.n
    r = data.radii.r_values
    scaled = data.values * r[None, :] ** (n - 2)
    K = r.size
    if m == 0:
        return FilteredData(data.geometry, data.directions, data.radii, scaled, 0,
                            np.zeros(K, dtype=bool))

    rho_k = r * r
    P = int(round(oversample * K))
    rho = np.linspace(rho_k[0], rho_k[-1], P)
    drho = rho[1] - rho[0]
    resampled = lagrange_interp(rho_k, scaled, rho, resample_points(m))
    deriv, boundary = derivative_uniform(resampled, drho, m)
    q = np.empty_like(scaled)
    for j in range(q.shape[0]):
        q[j] = cubic_uniform_many(deriv[j], rho[0], drho, rho_k)
    # radii whose interpolation stencil touches a one-sided derivative node
    s = (rho_k - rho[0]) / drho
    touched = np.zeros(K, dtype=bool)
    bidx = np.flatnonzero(boundary)
    for b in bidx:
        touched |= np.abs(s - b) < 2.0
    return FilteredData(data.geometry, data.directions, data.radii, q, m, touched)
