"""Stand-alone spherical-centre inversion used as an oracle in the tests.

For centres on the unit sphere in R^3 the classical inversion reads

    f(x) = -1/(2 pi) Delta_x int_{S^2} (r g)(sigma, |x - sigma|) d sigma,

where g(sigma, r) is the mean over the sphere of radius r around sigma.
This module codes that formula directly with numpy (vectorised over grid
nodes, explicit slicing Laplacian) and shares no code with the package
beyond reading the quadrature nodes and grids it is given.
"""

import math

import numpy as np


def _cubic_weights(t):
    return np.stack([
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ])


def interpolate_uniform(samples, r0, dr, x):
    """4-point Lagrange interpolation, stencil clamped inside, zero off-grid."""
    K = samples.size
    s = (x - r0) / dr
    lo = np.clip(np.floor(s).astype(np.int64) - 1, 0, K - 4)
    t = s - (lo + 1)
    w = _cubic_weights(t)
    vals = sum(w[i] * samples[lo + i] for i in range(4))
    off = (s < -1e-9) | (s > K - 1 + 1e-9)
    return np.where(off, 0.0, vals)


def spherical_inversion(nodes, weights, r_values, dr, means, axes_1d):
    """Evaluate the classical n = 3 formula on the tensor grid ``axes_1d``.

    Returns the full grid of values; nodes within one cell of the grid edge
    are left at zero (no Laplacian stencil).
    """
    X, Y, Z = np.meshgrid(*axes_1d, indexing="ij")
    pts = np.stack([X, Y, Z], axis=-1)
    h = [ax[1] - ax[0] for ax in axes_1d]
    back = np.zeros(X.shape)
    rg = means * r_values[None, :]
    for sigma, w, row in zip(nodes, weights, rg):
        dist = np.sqrt(np.sum((pts - sigma) ** 2, axis=-1))
        back += w * interpolate_uniform(row, r_values[0], dr, dist)
    lap = np.zeros_like(back)
    c = (slice(1, -1),) * 3
    for axis in range(3):
        fwd = [slice(1, -1)] * 3
        bwd = [slice(1, -1)] * 3
        fwd[axis] = slice(2, None)
        bwd[axis] = slice(None, -2)
        lap[c] += (back[tuple(fwd)] - 2.0 * back[c] + back[tuple(bwd)]) / h[axis] ** 2
    return -lap / (2.0 * math.pi)
