"""Back-projection, anisotropic Laplacian and the full inversion pipeline."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation, generate_binary_structure

from . import _kernels
from .filtering import FilteredData, radial_filter
from .forward import MeanData
from .geometry import Ellipsoid, SphereQuadrature, reconstruction_constant

__all__ = [
    "VolumeGrid",
    "ReconImage",
    "backproject_even",
    "backproject_odd",
    "apply_anisotropic_laplacian",
    "reconstruct",
    "INTEGRANDS",
    "QUADRATURES",
]

# "proof": (D_r^{n-3} r^{n-2} Mf)(A sigma, |x - A sigma|), the form that reduces
# to the classical spherical formula; "theorem": the same times |x - A sigma|.
INTEGRANDS = ("proof", "theorem")
QUADRATURES = ("product", "midpoint")


@dataclass(frozen=True)
class VolumeGrid:
    """Cartesian grid over the bounding box of E, widened by ``margin``.

    ``mask`` holds nodes with |A^{-1} x| < 1 - eps_mask where
    eps_mask = 2 max(h) / min(a); ``stencil_mask`` adds their Laplacian
    neighbours (the nodes the back-projector has to visit).
    """

    geometry: Ellipsoid
    shape: tuple[int, ...]
    margin: float = 0.0

    def __post_init__(self):
        shape = tuple(int(s) for s in np.broadcast_to(np.atleast_1d(self.shape), (self.geometry.n,)))
        if any(s < 3 for s in shape):
            raise ValueError(f"need at least 3 nodes per axis, got {shape}")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        object.__setattr__(self, "shape", shape)

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def lower(self) -> np.ndarray:
        return -(self.geometry.axes + self.margin)

    @property
    def spacing(self) -> np.ndarray:
        return 2.0 * (self.geometry.axes + self.margin) / (np.asarray(self.shape) - 1)

    @property
    def axes(self) -> list[np.ndarray]:
        return [lo + h * np.arange(s) for lo, h, s in zip(self.lower, self.spacing, self.shape)]

    @property
    def eps_mask(self) -> float:
        return 2.0 * float(self.spacing.max()) / min(self.geometry.semi_axes)

    def coordinates(self) -> np.ndarray:
        """Node coordinates, shape ``shape + (n,)``."""
        return np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1)

    def normalized_radius(self) -> np.ndarray:
        return self.geometry.normalized_radius(self.coordinates())

    @property
    def mask(self) -> np.ndarray:
        return self.normalized_radius() < 1.0 - self.eps_mask

    @property
    def stencil_mask(self) -> np.ndarray:
        return binary_dilation(self.mask, generate_binary_structure(self.n, 1))


@dataclass
class ReconImage:
    grid: VolumeGrid
    values: np.ndarray
    stage: str
    mask: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def masked(self) -> np.ndarray:
        return self.values[self.mask]


def _band(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row [first, last+1) range of nonzero entries (empty rows give 0, 0)."""
    nz = values != 0.0
    any_nz = nz.any(axis=1)
    K = values.shape[1]
    lo = np.where(any_nz, nz.argmax(axis=1), 0)
    hi = np.where(any_nz, K - nz[:, ::-1].argmax(axis=1), 0)
    return lo.astype(np.int64), hi.astype(np.int64)


def _chunked(kernel, points: np.ndarray, threads: int, *args):
    """Run ``kernel(points_chunk, *args)`` over contiguous chunks of nodes.

    Kernels release the GIL and treat every node independently, so the
    result does not depend on ``threads``.
    """
    threads = max(1, int(threads))
    if threads == 1 or len(points) < 2 * threads:
        return [kernel(points, *args)]
    chunks = np.array_split(points, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: kernel(np.ascontiguousarray(c), *args), chunks))


def backproject_even(filtered: FilteredData, grid: VolumeGrid,
                     quadrature: str = "product", threads: int = 1) -> ReconImage:
    """Log-kernel back-projection int_S int_0^inf r q log| |x - A sigma|^2 - r^2 | dr dsigma.

    ``quadrature="midpoint"`` is the plain staggered sum
    sum_k dr r_k q[j, k] log| |x - A sigma_j|^2 - r_k^2 |; terms landing
    exactly on the singularity are dropped and counted in
    ``diagnostics["skipped_terms"]``.  Its error jumps from node to node, which
    the subsequent Laplacian amplifies by 1/h^2.

    ``quadrature="product"`` (default) writes the radial integral as
    (1/2) int q log|u - rho| d rho with rho = r^2, interpolates q linearly
    between the samples rho_k = r_k^2 and integrates the logarithm exactly,
    giving a smooth function of u = |x - A sigma|^2.
    """
    if filtered.n % 2:
        raise ValueError("even back-projection needs an even dimension")
    if filtered.order != filtered.n - 2:
        raise ValueError(f"expected filter order {filtered.n - 2}, got {filtered.order}")
    if quadrature not in QUADRATURES:
        raise ValueError(f"quadrature must be one of {QUADRATURES}, got {quadrature!r}")
    radii = filtered.radii
    r = radii.r_values
    eval_mask = grid.stencil_mask
    points = np.ascontiguousarray(grid.coordinates()[eval_mask])
    centers = np.ascontiguousarray(filtered.centers)
    weights = np.ascontiguousarray(filtered.directions.weights)
    diagnostics = {"quadrature": quadrature}
    if quadrature == "midpoint":
        coeff = np.ascontiguousarray(radii.dr * r[None, :] * filtered.values)
        k_lo, k_hi = _band(coeff)
        parts = _chunked(_kernels.backproject_log, points, threads, centers, weights,
                         np.ascontiguousarray(r), coeff, k_lo, k_hi)
        vals = np.concatenate([p[0] for p in parts])
        diagnostics["skipped_terms"] = int(sum(p[1] for p in parts))
    else:
        values = np.ascontiguousarray(filtered.values)
        k_lo, k_hi = _band(values)
        parts = _chunked(_kernels.backproject_log_product, points, threads, centers, weights,
                         np.ascontiguousarray(r * r), values, k_lo, k_hi)
        vals = 0.5 * np.concatenate(parts)
        diagnostics["skipped_terms"] = 0
    image = np.zeros(grid.shape)
    image[eval_mask] = vals
    return ReconImage(grid, image, "backprojected", eval_mask, diagnostics)


def backproject_odd(filtered: FilteredData, geometry: Ellipsoid, directions: SphereQuadrature,
                    grid: VolumeGrid, integrand: str = "proof", threads: int = 1) -> ReconImage:
    """sum_j w_j q_j(|x - A sigma_j|) with q_j cubically interpolated in r.

    ``integrand="theorem"`` multiplies each term by |x - A sigma_j| (only
    useful for comparing the two readings of the odd-dimensional formula).
    """
    if filtered.n % 2 == 0:
        raise ValueError("odd back-projection needs an odd dimension")
    if filtered.order != filtered.n - 3:
        raise ValueError(f"expected filter order {filtered.n - 3}, got {filtered.order}")
    if integrand not in INTEGRANDS:
        raise ValueError(f"integrand must be one of {INTEGRANDS}, got {integrand!r}")
    radii = filtered.radii
    eval_mask = grid.stencil_mask
    points = np.ascontiguousarray(grid.coordinates()[eval_mask])
    vals = np.concatenate(_chunked(
        _kernels.backproject_sample,
        points,
        threads,
        np.ascontiguousarray(geometry.boundary_points(directions.nodes)),
        np.ascontiguousarray(directions.weights),
        np.ascontiguousarray(filtered.values),
        radii.r0,
        radii.dr,
        1 if integrand == "theorem" else 0,
    ))
    image = np.zeros(grid.shape)
    image[eval_mask] = vals
    return ReconImage(grid, image, "backprojected", eval_mask, {"integrand": integrand})


def apply_anisotropic_laplacian(image: ReconImage, geometry: Ellipsoid) -> ReconImage:
    """sum_i a_i^{-2} d^2/dx_i^2 by second-order central differences.

    Evaluated on the grid's interior mask; nodes whose stencil leaves the
    grid or the back-projected region are dropped from the mask and counted.
    """
    if image.stage != "backprojected":
        raise ValueError(f"expected a back-projected image, got stage {image.stage!r}")
    grid = image.grid
    v = image.values
    available = image.mask
    out = np.zeros_like(v)
    ok = grid.mask & available
    for i, (a, h) in enumerate(zip(geometry.semi_axes, grid.spacing)):
        fwd = np.roll(v, -1, axis=i)
        bwd = np.roll(v, 1, axis=i)
        out += (fwd - 2.0 * v + bwd) / (h * h * a * a)
        have_fwd = np.roll(available, -1, axis=i)
        have_bwd = np.roll(available, 1, axis=i)
        edge = [slice(None)] * v.ndim
        edge[i] = 0
        have_bwd[tuple(edge)] = False
        edge[i] = -1
        have_fwd[tuple(edge)] = False
        ok &= have_fwd & have_bwd
    dropped = int((grid.mask & ~ok).sum())
    out[~ok] = 0.0
    diagnostics = dict(image.diagnostics, dropped_nodes=dropped)
    return ReconImage(grid, out, "laplacian-applied", ok, diagnostics)


def reconstruct(data: MeanData, grid: VolumeGrid, integrand: str = "proof",
                quadrature: str = "product", oversample: float = 1.0,
                threads: int = 1) -> ReconImage:
    """Invert sampled spherical means on ``grid``.

    Even n: filter with D_r^{n-2}, log-kernel back-projection.
    Odd n:  filter with D_r^{n-3}, evaluation at r = |x - A sigma|.
    Both are followed by Delta_{Ax} and the factor det(A) / c_n.
    """
    n = data.n
    if grid.n != n:
        raise ValueError(f"grid is {grid.n}-D but data is {n}-D")
    geometry = data.geometry
    if n % 2 == 0:
        filtered = radial_filter(data, n - 2, oversample)
        image = backproject_even(filtered, grid, quadrature, threads)
    else:
        filtered = radial_filter(data, n - 3, oversample)
        image = backproject_odd(filtered, geometry, data.directions, grid, integrand, threads)
    image = apply_anisotropic_laplacian(image, geometry)
    image.values *= geometry.det / reconstruction_constant(n)
    image.diagnostics["filter_margin"] = int(filtered.margin.sum())
    return image
