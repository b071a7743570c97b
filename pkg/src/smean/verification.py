"""Numerical oracles for the identities behind the inversion formulas.

Each ``check_*`` function returns a :class:`CheckReport`; ``run_all`` runs a
configured suite and merges the reports by name.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from scipy.signal import fftconvolve

from .forward import darboux_residual
from .geometry import (
    Ellipsoid,
    SphereQuadrature,
    build_sphere_quadrature,
    fundamental_solution,
    gegenbauer_rule,
    sphere_surface_area,
)
from .phantom import Phantom, RadialBump

__all__ = [
    "CheckReport",
    "VerifyConfig",
    "hilbert_pv",
    "hilbert_derivative",
    "log_cosine_mean",
    "kernel_argument",
    "check_funk_hecke",
    "check_hilbert_identity",
    "check_log_two",
    "check_kernel_even",
    "check_kernel_odd",
    "check_norm_estimate",
    "check_fundamental_identity",
    "check_darboux",
    "run_all",
]


@dataclass
class CheckReport:
    name: str
    error: float
    tolerance: float
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def __str__(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: error={self.error:.3e} tol={self.tolerance:.1e}"


# ----------------------------------------------------------------------------
# one-dimensional singular quadrature


def _graded_legendre(a: float, b: float, num: int, grade: int = 6):
    """Gauss-Legendre nodes on [a, b] clustered towards ``a`` by t -> t^grade.

    Integrates functions with a logarithmic singularity at ``a`` to high order.
    """
    u, w = np.polynomial.legendre.leggauss(num)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    return a + (b - a) * u**grade, (b - a) * grade * u ** (grade - 1) * w


def log_cosine_mean(s_star: float, num: int = 64) -> float:
    """(1/pi) int_0^pi log|s_star - cos t| dt for |s_star| < 1.

    The integrand is split at the singular angle and each side integrated
    with graded Gauss-Legendre nodes.
    """
    if abs(s_star) >= 1:
        raise ValueError("need |s_star| < 1")
    t_star = math.acos(s_star)
    total = 0.0
    for sign, length in ((-1.0, t_star), (1.0, math.pi - t_star)):
        # d = |t - t_star|; s_star - cos t = 2 sin((t + t_star)/2) sin((t - t_star)/2)
        d, w = _graded_legendre(0.0, length, num)
        theta = t_star + sign * d
        vals = np.log(2.0 * np.abs(np.sin(0.5 * (theta + t_star)))) + np.log(np.abs(np.sin(0.5 * d)))
        total += float(w @ vals)
    return total / math.pi


def hilbert_pv(g, s_star: float, num: int = 128) -> float:
    """(1/pi) P.V. int_{-1}^{1} g(s) / (s_star - s) ds by singularity subtraction.

    int [g(s) - g(s_star)] / (s_star - s) ds is smooth and is integrated in
    the angle s = cos t; the subtracted pole contributes
    g(s_star) log((1 + s_star) / (1 - s_star)) exactly.
    """
    if abs(s_star) >= 1:
        raise ValueError("need |s_star| < 1")
    u, w = np.polynomial.legendre.leggauss(num)
    theta = 0.5 * math.pi * (u + 1.0)
    w = 0.5 * math.pi * w
    s = np.cos(theta)
    g0 = float(g(np.array([s_star]))[0])
    diff = s_star - s
    close = np.abs(diff) < 1e-9
    remainder = np.empty_like(s)
    remainder[~close] = (g(s[~close]) - g0) / diff[~close]
    if np.any(close):
        eps = 1e-6
        slope = (g(np.array([s_star + eps]))[0] - g(np.array([s_star - eps]))[0]) / (2 * eps)
        remainder[close] = -slope
    smooth = float(w @ (remainder * np.sin(theta)))
    pole = g0 * math.log((1.0 + s_star) / (1.0 - s_star))
    return (smooth + pole) / math.pi


def _semicircle_power(n: int):
    k = 0.5 * (n - 3)
    return lambda s: np.maximum(1.0 - np.asarray(s) ** 2, 0.0) ** k


def hilbert_derivative(n: int, s_star: float, num: int = 128) -> float:
    """d^{n-3}/ds_star^{n-3} of H_s[(1 - s^2)_+^{(n-3)/2}] at s_star.

    Fits a Chebyshev polynomial of degree n + 1 to PV samples at 2n + 3
    Chebyshev points of the window [s_star - 0.25, s_star + 0.25] clipped to
    [-0.99, 0.99], and differentiates the fit.
    """
    if abs(s_star) >= 1:
        raise ValueError("need |s_star| < 1")
    g = _semicircle_power(n)
    lo = max(s_star - 0.25, -0.99)
    hi = min(s_star + 0.25, 0.99)
    m = 2 * n + 3
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * (np.arange(m) + 0.5) / m)
    vals = np.array([hilbert_pv(g, s, num) for s in nodes])
    fit = Chebyshev.fit(nodes, vals, n + 1, domain=[lo, hi])
    return float(fit.deriv(n - 3)(s_star))


def kernel_argument(geometry: Ellipsoid, x, y) -> tuple[float, float]:
    """(s_star, |Ax - Ay|) with s_star = (|x|^2 - |y|^2) / (2 |A(x - y)|)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dist = float(np.linalg.norm(geometry.axes * (x - y)))
    if dist == 0.0:
        raise ZeroDivisionError("kernel is singular at x == y")
    return float((x @ x - y @ y) / (2.0 * dist)), dist


# ----------------------------------------------------------------------------
# checks


def check_funk_hecke(n: int, h, v, quad: SphereQuadrature | None = None,
                     order: int = 24, line_points: int = 64, tol: float = 1e-10,
                     name: str | None = None) -> CheckReport:
    """Sphere integral of h(<sigma, v>) against its one-dimensional zonal reduction.

    The error is |lhs - rhs| / max(1, |rhs|).
    """
    v = np.asarray(v, dtype=float)
    quad = quad or build_sphere_quadrature(n, order)
    lhs = float(quad.weights @ h(quad.nodes @ v))
    s, w = gegenbauer_rule(line_points, n)
    rhs = sphere_surface_area(n - 1) * float(w @ h(np.linalg.norm(v) * s))
    err = abs(lhs - rhs) / max(1.0, abs(rhs))
    return CheckReport(name or f"funk_hecke[n={n}]", err, tol,
                       {"n": n, "lhs": lhs, "rhs": rhs, "quad_nodes": len(quad)})


def check_hilbert_identity(n: int, s_samples=None, num: int = 128,
                           tol: float = 1e-6) -> CheckReport:
    """d^{n-3} H_s[(1-s^2)_+^{(n-3)/2}](s_star) == (-1)^{n/2} (n-3)! for even n >= 4."""
    if n < 4 or n % 2:
        raise ValueError("the Hilbert identity is stated for even n >= 4")
    if s_samples is None:
        s_samples = np.linspace(-0.9, 0.9, 7)
    s_samples = np.asarray(s_samples, dtype=float)
    if np.any(np.abs(s_samples) > 0.9):
        raise ValueError("samples must satisfy |s_star| <= 0.9")
    target = (-1) ** (n // 2) * math.factorial(n - 3)
    values = np.array([hilbert_derivative(n, s, num) for s in s_samples])
    err = float(np.max(np.abs(values - target)) / abs(target))
    return CheckReport(f"hilbert_identity[n={n}]", err, tol,
                       {"n": n, "target": target, "samples": len(s_samples),
                        "values_min": float(values.min()), "values_max": float(values.max())})


def check_log_two(s_samples=(0.0, 0.5, -0.5), num: int = 64, tol: float = 1e-8) -> CheckReport:
    """(1/pi) int_{-1}^{1} log|s_star - s| / sqrt(1 - s^2) ds == -log 2."""
    values = np.array([log_cosine_mean(s, num) for s in s_samples])
    err = float(np.max(np.abs(values + math.log(2.0))))
    return CheckReport("log_two", err, tol, {"samples": list(map(float, s_samples)),
                                             "refined_error": float(np.max(np.abs(
                                                 [log_cosine_mean(s, 2 * num) + math.log(2.0)
                                                  for s in s_samples])))})


def _kernel_constant_even(n: int) -> float:
    return (-1) ** ((n - 2) // 2) * math.pi * sphere_surface_area(n - 1) * math.factorial(n - 2) / 2.0 ** (n - 2)


def _kernel_constant_odd(n: int) -> float:
    return (-1) ** ((n - 1) // 2) * sphere_surface_area(n - 1) * math.factorial(n - 2) / 2.0 ** (n - 2)


def check_kernel_even(n: int, geometry: Ellipsoid, x, y, num: int = 64,
                      tol: float | None = None) -> CheckReport:
    """Zonal log-kernel integral against the constant multiple of G_n(Ax, Ay).

    n = 2: direct quadrature of (1/pi) int (1-s^2)^{-1/2} log|2D(s_star - s)| ds.
    n >= 4: Hilbert-transform reduction (PV quadrature and s_star-differentiation).
    Error is relative to max(1, |rhs|) for n = 2 and to |rhs| otherwise.
    """
    if n % 2 or geometry.n != n:
        raise ValueError("check_kernel_even needs an even n matching the ellipsoid")
    s_star, dist = kernel_argument(geometry, x, y)
    if abs(s_star) >= 1:
        raise ValueError(f"|s_star| = {abs(s_star):.3g} >= 1")
    rhs = _kernel_constant_even(n) * float(fundamental_solution(n, dist))
    ratio = sphere_surface_area(n - 1) / sphere_surface_area(n)
    if n == 2:
        lhs = math.log(2.0 * dist) + log_cosine_mean(s_star, num)
        refined = math.log(2.0 * dist) + log_cosine_mean(s_star, 2 * num)
        err = abs(lhs - rhs) / max(1.0, abs(rhs))
        params = {"refined_error": abs(refined - rhs) / max(1.0, abs(rhs))}
        if tol is None:
            tol = 1e-6
    else:
        lhs = ratio * math.pi / (2.0**(n - 2) * dist**(n - 2)) * hilbert_derivative(n, s_star, 2 * num)
        err = abs(lhs - rhs) / abs(rhs)
        params = {}
        if tol is None:
            tol = 1e-5
    params.update({"n": n, "s_star": s_star, "dist": dist, "lhs": lhs, "rhs": rhs})
    return CheckReport(f"kernel_even[n={n}]", err, tol, params)


def check_kernel_odd(n: int, geometry: Ellipsoid, x, y, tol: float = 1e-10) -> CheckReport:
    """Delta-sifted kernel chain against the constant multiple of G_n(Ax, Ay).

    After the delta collapses the s-integral the kernel is
    (omega_{n-2}/omega_{n-1}) (2D)^{-(n-2)} d^{n-3}(1 - s^2)^{(n-3)/2} at s_star,
    differentiated exactly as a polynomial.
    """
    if n % 2 == 0 or n < 3 or geometry.n != n:
        raise ValueError("check_kernel_odd needs an odd n >= 3 matching the ellipsoid")
    s_star, dist = kernel_argument(geometry, x, y)
    if abs(s_star) >= 1:
        raise ValueError(f"|s_star| = {abs(s_star):.3g} >= 1")
    poly = Polynomial([1.0, 0.0, -1.0]) ** ((n - 3) // 2)
    deriv = float(poly.deriv(n - 3)(s_star)) if n > 3 else float(poly(s_star))
    ratio = sphere_surface_area(n - 1) / sphere_surface_area(n)
    lhs = ratio * deriv / (2.0 * dist) ** (n - 2)
    rhs = _kernel_constant_odd(n) * float(fundamental_solution(n, dist))
    err = abs(lhs - rhs) / abs(rhs)
    return CheckReport(f"kernel_odd[n={n}]", err, tol,
                       {"n": n, "s_star": s_star, "dist": dist, "lhs": lhs, "rhs": rhs})


def _sample_inside(geometry: Ellipsoid, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in E by rejection from the bounding box."""
    out = []
    need = count
    while need > 0:
        batch = rng.uniform(-1.0, 1.0, size=(2 * need + 16, geometry.n)) * geometry.axes
        batch = batch[geometry.normalized_radius(batch) < 1.0]
        out.append(batch[:need])
        need -= len(out[-1])
    return np.concatenate(out)


def _norm_ratio(geometry: Ellipsoid, x, y) -> np.ndarray:
    num = np.sum(x * x, axis=-1) - np.sum(y * y, axis=-1)
    den = 2.0 * np.linalg.norm(geometry.axes * (x - y), axis=-1)
    return np.abs(num / den)


def check_norm_estimate(geometry: Ellipsoid, trials: int = 100_000, seed: int = 0,
                        shell: float | None = None) -> CheckReport:
    """Max of |(|x|^2 - |y|^2) / (2|A(x - y)|)| over random pairs in E.

    ``shell`` samples both points on the level set |A^{-1} x| = shell instead.
    The check passes while every observed ratio stays strictly below 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    if shell is None:
        x = _sample_inside(geometry, trials, rng)
        y = _sample_inside(geometry, trials, rng)
    else:
        if not 0 < shell < 1:
            raise ValueError("shell must lie in (0, 1)")
        sx = rng.normal(size=(trials, geometry.n))
        sx /= np.linalg.norm(sx, axis=1, keepdims=True)
        # half the pairs are independent, half are close neighbours on the shell
        spread = np.where(np.arange(trials) % 2 == 0, 2.0, 0.05)[:, None]
        sy = sx + spread * rng.normal(size=(trials, geometry.n))
        sy /= np.linalg.norm(sy, axis=1, keepdims=True)
        x = shell * geometry.axes * sx
        y = shell * geometry.axes * sy
    keep = np.any(x != y, axis=1)
    ratios = _norm_ratio(geometry, x[keep], y[keep])
    worst = float(ratios.max())
    # strict inequality: the error is how far the worst ratio gets to 1
    label = "norm_estimate" if shell is None else f"norm_estimate[shell={shell}]"
    return CheckReport(label, worst, np.nextafter(1.0, 0.0),
                       {"trials": int(keep.sum()), "max_ratio": worst, "seed": seed})


def _cell_average(n: int, axes, h, gauss: int = 6) -> float:
    """Average of G_n(A u) over the cell [-h/2, h/2]^n (self-similar subdivision)."""
    t, w = np.polynomial.legendre.leggauss(gauss)
    sub = h / 3.0
    offsets = np.array(np.meshgrid(*[[-1, 0, 1]] * n, indexing="ij")).reshape(n, -1).T
    offsets = offsets[np.any(offsets != 0, axis=1)]
    local = np.array(np.meshgrid(*[0.5 * sub * t] * n, indexing="ij")).reshape(n, -1).T
    lw = np.prod(np.array(np.meshgrid(*[w] * n, indexing="ij")).reshape(n, -1), axis=0) / 2.0**n
    total = 0.0
    for off in offsets:
        pts = off * sub + local
        total += float(lw @ fundamental_solution(n, np.linalg.norm(pts * axes, axis=1)))
    others = total / 3.0**n
    centre_frac = 1.0 / 3.0**n
    if n == 2:
        # G(u/3) = G(u) - log(3) / 2pi
        return (others - centre_frac * math.log(3.0) / (2 * math.pi)) / (1.0 - centre_frac)
    # G(u/3) = 3^{n-2} G(u)
    return others / (1.0 - centre_frac * 3.0 ** (n - 2))


def check_fundamental_identity(phantom: Phantom, geometry: Ellipsoid, x_samples=None,
                               nodes: int | None = None, tol: float = 5e-3) -> CheckReport:
    """det(A) Delta_{Ax} int f(y) G_n(Ax, Ay) dy == f(x) at grid samples.

    The volume integral is a cell-centred convolution (FFT) of f with G_n(A .)
    whose singular cell holds the exact cell average; Delta_{Ax} is the
    5-/7-point stencil.  Error is max |lhs - f| / max |f| over the samples
    (all interior nodes if ``x_samples`` is None).
    """
    n = geometry.n
    if n not in (2, 3):
        raise ValueError("the direct volume check is limited to n in {2, 3}")
    if nodes is None:
        nodes = 512 if n == 2 else 96
    axes = geometry.axes
    h = 2.0 * axes.max() / (nodes - 1)
    counts = [int(math.ceil(a / h)) for a in axes]
    grid_axes = [h * np.arange(-c, c + 1) for c in counts]
    coords = np.stack(np.meshgrid(*grid_axes, indexing="ij"), axis=-1)
    f = np.asarray(phantom.eval(coords))
    kern_axes = [h * np.arange(-2 * c, 2 * c + 1) for c in counts]
    kcoords = np.stack(np.meshgrid(*kern_axes, indexing="ij"), axis=-1)
    with np.errstate(divide="ignore"):
        kernel = fundamental_solution(n, np.linalg.norm(kcoords * axes, axis=-1))
    kernel[tuple(2 * c for c in counts)] = _cell_average(n, axes, h)
    potential = h**n * fftconvolve(f, kernel, mode="same")
    lap = np.zeros_like(potential)
    inner = tuple(slice(1, -1) for _ in range(n))
    for i, a in enumerate(axes):
        lo = list(inner)
        hi = list(inner)
        lo[i] = slice(0, -2)
        hi[i] = slice(2, None)
        lap[inner] += (potential[tuple(hi)] - 2 * potential[inner] + potential[tuple(lo)]) / (h * h * a * a)
    lhs = geometry.det * lap
    interior = np.zeros(f.shape, dtype=bool)
    interior[inner] = True
    scale = max(float(np.abs(f).max()), 1e-300) if np.any(f) else 1.0
    if x_samples is None:
        err = float(np.abs(lhs - f)[interior].max()) / scale
        samples = int(interior.sum())
    else:
        idx = [tuple(np.rint((np.asarray(x) + np.array(counts) * h) / h).astype(int))
               for x in np.atleast_2d(x_samples)]
        err = max(abs(lhs[i] - f[i]) for i in idx) / scale
        samples = len(idx)
    return CheckReport(f"fundamental_identity[n={n}]", err, tol,
                       {"n": n, "nodes": nodes, "h": h, "samples": samples})


def check_darboux(phantom: Phantom, z, r: float, h: float = 1e-2,
                  band: tuple[float, float] = (3.5, 4.5)) -> CheckReport:
    """Richardson ratio residual(h) / residual(h/2) of the Darboux equation.

    The error is |ratio - centre of band| against the band half-width, so a
    pass means the ratio lies in ``band`` (second-order consistency).
    """
    coarse = darboux_residual(phantom, z, r, h)
    fine = darboux_residual(phantom, z, r, h / 2)
    ratio = coarse / fine if fine > 0 else math.inf
    centre = 0.5 * (band[0] + band[1])
    return CheckReport(f"darboux[n={phantom.n}]", abs(ratio - centre), 0.5 * (band[1] - band[0]),
                       {"ratio": ratio, "residual_h": coarse, "residual_h2": fine, "h": h, "r": r})


# ----------------------------------------------------------------------------
# suite


DEFAULT_AXES = {2: (1.0, 0.7), 3: (1.0, 0.8, 0.6), 4: (1.0, 0.9, 0.8, 0.7),
                5: (1.0, 0.9, 0.8, 0.7, 0.6), 6: (1.0, 0.9, 0.8, 0.7, 0.6, 0.5),
                8: (1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65)}

ALL_CHECKS = ("funk_hecke", "hilbert", "log_two", "kernel_even", "kernel_odd",
              "norm_estimate", "fundamental", "darboux")


@dataclass
class VerifyConfig:
    """Sizes and tolerances of the identity check suite.

    ``tolerance_scale`` multiplies every tolerance (values < 1 tighten).
    ``dims`` restricts dimension-dependent checks; ``None`` means the defaults.
    """

    checks: tuple[str, ...] = ALL_CHECKS
    dims: tuple[int, ...] | None = None
    pairs: int = 20
    norm_trials: int = 100_000
    seed: int = 0
    tolerance_scale: float = 1.0
    fundamental_nodes: int = 512
    threads: int = 1


def _wanted(cfg: VerifyConfig, defaults):
    return [d for d in defaults if cfg.dims is None or d in cfg.dims]


def _pairs(geometry: Ellipsoid, count: int, rng: np.random.Generator):
    x = _sample_inside(geometry, count, rng)
    y = _sample_inside(geometry, count, rng)
    return x, y


def _worst(reports: list[CheckReport], name: str, tol: float) -> CheckReport:
    worst = max(reports, key=lambda r: r.error)
    return CheckReport(name, worst.error, tol, dict(worst.params, pairs=len(reports)))


def _suite_tasks(cfg: VerifyConfig):
    s = cfg.tolerance_scale
    tasks = []

    if "funk_hecke" in cfg.checks:
        profiles = {"const": lambda t: np.ones_like(t), "linear": lambda t: t,
                    "square": lambda t: t**2, "quartic": lambda t: 3 * t**4 - t**3 + 0.5 * t}
        for n in _wanted(cfg, (2, 3, 4, 5)):
            def task(n=n):
                rng = np.random.default_rng(cfg.seed + n)
                v = rng.normal(size=n)
                reps = [check_funk_hecke(n, h, v, order=16, tol=1e-10 * s, name=f"funk_hecke[{k}]")
                        for k, h in profiles.items()]
                return _worst(reps, f"funk_hecke[n={n}]", 1e-10 * s)
            tasks.append(task)

    if "hilbert" in cfg.checks:
        for n in _wanted(cfg, (4, 6, 8)):
            tasks.append(lambda n=n: check_hilbert_identity(n, tol=1e-6 * s))

    if "log_two" in cfg.checks and (cfg.dims is None or 2 in cfg.dims):
        tasks.append(lambda: check_log_two(tol=1e-8 * s))

    if "kernel_even" in cfg.checks:
        for n, tol in ((2, 1e-6), (4, 1e-5)):
            if cfg.dims is not None and n not in cfg.dims:
                continue

            def task(n=n, tol=tol):
                g = Ellipsoid(DEFAULT_AXES[n])
                xs, ys = _pairs(g, cfg.pairs, np.random.default_rng(cfg.seed + 100 + n))
                reps = [check_kernel_even(n, g, x, y, tol=tol * s) for x, y in zip(xs, ys)]
                return _worst(reps, f"kernel_even[n={n}]", tol * s)
            tasks.append(task)

    if "kernel_odd" in cfg.checks:
        for n in _wanted(cfg, (3, 5)):
            def task(n=n):
                g = Ellipsoid(DEFAULT_AXES[n])
                xs, ys = _pairs(g, cfg.pairs, np.random.default_rng(cfg.seed + 200 + n))
                reps = [check_kernel_odd(n, g, x, y, tol=1e-10 * s) for x, y in zip(xs, ys)]
                return _worst(reps, f"kernel_odd[n={n}]", 1e-10 * s)
            tasks.append(task)

    if "norm_estimate" in cfg.checks and (cfg.dims is None or 2 in cfg.dims):
        g = Ellipsoid(DEFAULT_AXES[2])
        tasks.append(lambda: check_norm_estimate(g, cfg.norm_trials, cfg.seed))
        tasks.append(lambda: check_norm_estimate(g, 1000, cfg.seed, shell=0.999))

    if "fundamental" in cfg.checks and (cfg.dims is None or 2 in cfg.dims):
        def task():
            g = Ellipsoid(DEFAULT_AXES[2])
            ph = Phantom([RadialBump((0.2, -0.1), 0.25, 1.0)], g)
            rep = check_fundamental_identity(ph, g, nodes=cfg.fundamental_nodes, tol=5e-3 * s)
            return rep
        tasks.append(task)

    if "darboux" in cfg.checks:
        for n in _wanted(cfg, (2, 3)):
            def task(n=n):
                ph = Phantom([RadialBump((0.0,) * n, 0.5, 1.0)])
                z = np.full(n, 0.05)
                rep = check_darboux(ph, z, 0.3)
                return rep
            tasks.append(task)
    return tasks


def run_all(config: VerifyConfig | None = None) -> list[CheckReport]:
    """Run the configured checks and return reports sorted by name."""
    cfg = config or VerifyConfig()
    tasks = _suite_tasks(cfg)
    if not tasks:
        return []
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        reports = list(pool.map(lambda t: t(), tasks))
    return sorted(reports, key=lambda r: r.name)
