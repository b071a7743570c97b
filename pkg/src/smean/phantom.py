"""Smooth radial test functions with semi-analytic spherical means."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Ellipsoid, sphere_surface_area

__all__ = ["RadialBump", "Phantom", "bump_profile", "DEFAULT_MEAN_ORDER"]

DEFAULT_MEAN_ORDER = 96


def bump_profile(t, radius: float) -> np.ndarray:
    """Standard mollifier exp(-1 / (1 - (t/radius)^2)), zero for t >= radius."""
    u = np.asarray(t, dtype=float) / radius
    inside = np.abs(u) < 1.0
    out = np.zeros(np.shape(u))
    with np.errstate(divide="ignore", over="ignore"):
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class RadialBump:
    center: tuple[float, ...]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        center = tuple(float(c) for c in np.atleast_1d(self.center))
        object.__setattr__(self, "center", center)
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"bump radius must be positive, got {self.radius!r}")
        if not np.isfinite(self.amplitude):
            raise ValueError("bump amplitude must be finite")

    @property
    def n(self) -> int:
        return len(self.center)

    def support_margin(self, geometry: Ellipsoid) -> float:
        """``1 - (|A^{-1} c| + radius / min a_i)``; positive means safely inside."""
        c = np.asarray(self.center)
        return 1.0 - (float(np.linalg.norm(c / geometry.axes)) + self.radius / min(geometry.semi_axes))

    def profile(self, t) -> np.ndarray:
        return self.amplitude * bump_profile(t, self.radius)


class Phantom:
    """Finite sum of radial bumps, optionally checked against an ellipsoid.

    Parameters
    ----------
    bumps : sequence of RadialBump
    geometry : Ellipsoid, optional
        If given, every bump must satisfy the support-margin rule
        ``|A^{-1} c| + rho0 / min(a) < 1``.
    """

    def __init__(self, bumps, geometry: Ellipsoid | None = None):
        bumps = tuple(bumps)
        if not bumps:
            raise ValueError("a phantom needs at least one bump")
        dims = {b.n for b in bumps}
        if len(dims) != 1:
            raise ValueError(f"bumps have mixed dimensions {sorted(dims)}")
        self.bumps = bumps
        self.n = dims.pop()
        self.geometry = geometry
        if geometry is not None:
            if geometry.n != self.n:
                raise ValueError(f"phantom is {self.n}-D but ellipsoid is {geometry.n}-D")
            for i, b in enumerate(bumps):
                if b.support_margin(geometry) <= 0:
                    raise ValueError(
                        f"bump {i} violates the support-margin rule "
                        f"|A^-1 c| + rho0/min(a) < 1 (margin {b.support_margin(geometry):.3g})"
                    )

    @classmethod
    def zero(cls, n: int) -> "Phantom":
        """The zero function, represented as one zero-amplitude bump."""
        return cls([RadialBump((0.0,) * n, 0.1, 0.0)])

    def __repr__(self):
        return f"Phantom(n={self.n}, bumps={list(self.bumps)!r})"

    @property
    def sup_norm(self) -> float:
        """Upper bound on max |f| (sum of |amplitude| e^{-1})."""
        return float(sum(abs(b.amplitude) for b in self.bumps) * np.exp(-1.0))

    def scaled(self, factor: float) -> "Phantom":
        return Phantom(
            [RadialBump(b.center, b.radius, factor * b.amplitude) for b in self.bumps],
            self.geometry,
        )

    def __add__(self, other: "Phantom") -> "Phantom":
        return Phantom(self.bumps + other.bumps, self.geometry or other.geometry)

    def __call__(self, x) -> np.ndarray:
        return self.eval(x)

    def eval(self, x) -> np.ndarray:
        """Evaluate f at points stacked along the last axis."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"points must have trailing dimension {self.n}")
        out = np.zeros(x.shape[:-1])
        for b in self.bumps:
            d = np.linalg.norm(x - np.asarray(b.center), axis=-1)
            out = out + b.profile(d)
        return out if out.ndim else float(out)

    def analytic_mean(self, z, r, quad_order: int = DEFAULT_MEAN_ORDER) -> np.ndarray:
        """Spherical means (Mf)(z, r) via the one-dimensional zonal reduction.

        For a radial bump phi(|y - c|) and rho = |z - c|,

            Mf(z, r) = (omega_{n-2}/omega_{n-1})
                       * int_0^pi sin^{n-2}(t) phi(sqrt(rho^2 + r^2 - 2 rho r cos t)) dt,

        integrated with Gauss-Legendre over the part of [0, pi] where the
        sphere meets the bump support.

        Parameters
        ----------
        z : array_like, shape (n,) or (J, n)
        r : array_like, shape () or (K,)

        Returns
        -------
        ndarray of shape (J, K) (squeezed for scalar inputs).
        """
        z = np.asarray(z, dtype=float)
        r = np.asarray(r, dtype=float)
        scalar_z, scalar_r = z.ndim == 1, r.ndim == 0
        z = np.atleast_2d(z)
        r = np.atleast_1d(r)
        if z.shape[-1] != self.n:
            raise ValueError(f"centres must have trailing dimension {self.n}")
        if np.any(r <= 0):
            raise ValueError("radii must be positive")

        u, wu = np.polynomial.legendre.leggauss(int(quad_order))
        ratio = sphere_surface_area(self.n - 1) / sphere_surface_area(self.n)
        out = np.zeros((z.shape[0], r.size))
        # chunk over centres to bound the (J, K, Q) working set
        chunk = max(1, 2_000_000 // (r.size * len(u)))
        for b in self.bumps:
            if b.amplitude == 0.0:
                continue
            c = np.asarray(b.center)
            for start in range(0, z.shape[0], chunk):
                rho = np.linalg.norm(z[start:start + chunk] - c, axis=-1)[:, None]
                out[start:start + chunk] += b.amplitude * _zonal_mean(
                    rho, r[None, :], b.radius, self.n, u, wu, ratio
                )
        if scalar_r:
            out = out[:, 0]
        if scalar_z:
            out = out[0]
        return out if np.ndim(out) else float(out)


def _zonal_mean(rho, r, radius, n, u, wu, ratio):
    rho, r = np.broadcast_arrays(rho, r)
    out = np.zeros(rho.shape)
    hit = (r < rho + radius) & (r > rho - radius)
    at_center = rho < 1e-300
    out[at_center & (r < radius)] = bump_profile(r[at_center & (r < radius)], radius)

    active = hit & ~at_center
    if not np.any(active):
        return out
    rh, ra = rho[active], r[active]
    # cos(theta) >= s_lo is where the sphere is inside the support ball
    s_lo = (rh * rh + ra * ra - radius * radius) / (2.0 * rh * ra)
    theta_max = np.arccos(np.clip(s_lo, -1.0, 1.0))
    theta = 0.5 * theta_max[:, None] * (u[None, :] + 1.0)
    d = np.sqrt(np.maximum(rh[:, None] ** 2 + ra[:, None] ** 2
                           - 2.0 * rh[:, None] * ra[:, None] * np.cos(theta), 0.0))
    vals = bump_profile(d, radius) * np.sin(theta) ** (n - 2)
    out[active] = ratio * 0.5 * theta_max * (vals @ wu)
    return out
