"""Compiled inner loops: cubic interpolation and the two back-projectors.

Every kernel loops over output nodes with a fixed summation order, so
results are bit-reproducible regardless of how the node set is split.
"""

import math

import numba
import numpy as np

_JIT = dict(cache=True, nogil=True)


@numba.njit(**_JIT)
def _lagrange4(t):
    """Weights of the 4-point cubic Lagrange rule on nodes -1, 0, 1, 2 at offset t."""
    tm1 = t - 1.0
    tm2 = t - 2.0
    tp1 = t + 1.0
    return (
        -t * tm1 * tm2 / 6.0,
        tp1 * tm1 * tm2 / 2.0,
        -tp1 * t * tm2 / 2.0,
        tp1 * t * tm1 / 6.0,
    )


@numba.njit(**_JIT)
def cubic_uniform_1d(values, x0, dx, x):
    """Cubic Lagrange interpolation of samples ``values[k]`` at ``x0 + k dx``.

    Returns 0 outside ``[x0, x0 + (K-1) dx]``; near the ends the stencil is
    shifted inward (still exact on cubics).
    """
    K = values.shape[0]
    s = (x - x0) / dx
    if s < -1e-9 or s > K - 1 + 1e-9:
        return 0.0
    i = int(math.floor(s))
    lo = i - 1
    if lo < 0:
        lo = 0
    if lo > K - 4:
        lo = K - 4
    t = s - (lo + 1)
    w0, w1, w2, w3 = _lagrange4(t)
    return w0 * values[lo] + w1 * values[lo + 1] + w2 * values[lo + 2] + w3 * values[lo + 3]


@numba.njit(**_JIT)
def cubic_uniform_many(values, x0, dx, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = cubic_uniform_1d(values, x0, dx, x[i])
    return out


@numba.njit(**_JIT)
def backproject_log(points, centers, weights, radii, coeff, k_lo, k_hi):
    """sum_j weights[j] sum_k coeff[j, k] log| |x - c_j|^2 - radii[k]^2 |.

    ``coeff`` already carries the radial quadrature factor.  Only
    ``k_lo[j] <= k < k_hi[j]`` (the nonzero band) is visited.  Exact hits of
    the singularity are skipped and counted.
    """
    N, n = points.shape
    J = centers.shape[0]
    r2 = radii * radii
    out = np.zeros(N)
    skipped = 0
    for p in range(N):
        acc = 0.0
        for j in range(J):
            u = 0.0
            for d in range(n):
                diff = points[p, d] - centers[j, d]
                u += diff * diff
            inner = 0.0
            for k in range(k_lo[j], k_hi[j]):
                s = abs(u - r2[k])
                if s == 0.0:
                    skipped += 1
                    continue
                inner += coeff[j, k] * math.log(s)
            acc += weights[j] * inner
        out[p] = acc
    return out, skipped


@numba.njit(**_JIT)
def _log_moments(t):
    """Antiderivatives of log|t| and t log|t| (zero at t = 0)."""
    if t == 0.0:
        return 0.0, 0.0
    lg = math.log(abs(t))
    return t * lg - t, 0.5 * t * t * lg - 0.25 * t * t


@numba.njit(**_JIT)
def backproject_log_product(points, centers, weights, knots, values, k_lo, k_hi):
    """sum_j weights[j] int phi_j(rho) log|u_j - rho| d rho, u_j = |x - c_j|^2.

    phi_j is the piecewise-linear interpolant of ``values[j]`` on ``knots``
    (zero outside), integrated against the logarithm in closed form.
    """
    N, n = points.shape
    J = centers.shape[0]
    K = knots.shape[0]
    out = np.zeros(N)
    for p in range(N):
        acc = 0.0
        for j in range(J):
            if k_hi[j] <= k_lo[j]:
                continue
            u = 0.0
            for d in range(n):
                diff = points[p, d] - centers[j, d]
                u += diff * diff
            first = k_lo[j] - 1
            if first < 0:
                first = 0
            last = k_hi[j]
            if last > K - 1:
                last = K - 1
            inner = 0.0
            t0 = knots[first] - u
            F0, G0 = _log_moments(t0)
            for k in range(first, last):
                t1 = knots[k + 1] - u
                F1, G1 = _log_moments(t1)
                slope = (values[j, k + 1] - values[j, k]) / (t1 - t0)
                alpha = values[j, k] - slope * t0
                inner += alpha * (F1 - F0) + slope * (G1 - G0)
                t0, F0, G0 = t1, F1, G1
            acc += weights[j] * inner
        out[p] = acc
    return out


@numba.njit(**_JIT)
def backproject_sample(points, centers, weights, values, r0, dr, power):
    """sum_j weights[j] d_j^power q_j(d_j) with d_j = |x - c_j| and q_j cubic-interpolated."""
    N, n = points.shape
    J = centers.shape[0]
    out = np.zeros(N)
    for p in range(N):
        acc = 0.0
        for j in range(J):
            d2 = 0.0
            for d in range(n):
                diff = points[p, d] - centers[j, d]
                d2 += diff * diff
            dist = math.sqrt(d2)
            v = cubic_uniform_1d(values[j], r0, dr, dist)
            if power != 0:
                v *= dist ** power
            acc += weights[j] * v
        out[p] = acc
    return out


def lagrange_interp(xp, fp, x, points: int = 4):
    """Local Lagrange interpolation on sorted, possibly nonuniform nodes.

    Uses the ``points`` nodes surrounding each query (4 = cubic).  ``fp`` may
    carry leading batch axes; interpolation acts on the last axis.  Queries
    outside ``[xp[0], xp[-1]]`` evaluate to 0.  Exact on polynomials of
    degree ``points - 1``.
    """
    xp = np.asarray(xp, dtype=float)
    fp = np.asarray(fp, dtype=float)
    x = np.asarray(x, dtype=float)
    K = xp.size
    if K < points:
        raise ValueError(f"interpolation needs at least {points} nodes")
    i = np.clip(np.searchsorted(xp, x, side="right") - 1, 0, K - 2)
    lo = np.clip(i - (points // 2 - 1), 0, K - points)
    idx = lo[:, None] + np.arange(points)[None, :]
    nodes = xp[idx]
    w = np.ones((x.size, points))
    for a in range(points):
        for b in range(points):
            if a != b:
                w[:, a] *= (x - nodes[:, b]) / (nodes[:, a] - nodes[:, b])
    out = np.einsum("...qa,qa->...q", fp[..., idx], w)
    outside = (x < xp[0]) | (x > xp[-1])
    out[..., outside] = 0.0
    return out


def cubic_interp(xp, fp, x):
    """Cubic (4-point) case of :func:`lagrange_interp`."""
    return lagrange_interp(xp, fp, x, 4)
