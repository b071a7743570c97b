"""End-to-end stages driven by a :class:`RunConfig`."""

from __future__ import annotations

import numpy as np

from .config import RunConfig
from .forward import MeanData, forward_transform
from .geometry import build_sphere_quadrature
from .metrics import INTERIOR_RADIUS, compare_volumes
from .reconstruction import ReconImage, VolumeGrid, reconstruct

__all__ = ["render_phantom", "run_forward", "run_reconstruct", "evaluate"]


def render_phantom(cfg: RunConfig, grid: VolumeGrid | None = None) -> ReconImage:
    """Ground truth sampled on the configured volume grid."""
    grid = grid or cfg.volume_grid()
    values = np.asarray(cfg.phantom().eval(grid.coordinates()), dtype=float)
    return ReconImage(grid, values, "phantom", grid.mask)


def run_forward(cfg: RunConfig) -> MeanData:
    geometry = cfg.geometry()
    directions = build_sphere_quadrature(geometry.n, cfg.direction_order)
    return forward_transform(cfg.phantom(), geometry, directions, cfg.radial_grid(),
                             method=cfg.forward_method)


def run_reconstruct(cfg: RunConfig, data: MeanData | None = None) -> ReconImage:
    data = data if data is not None else run_forward(cfg)
    if tuple(data.geometry.semi_axes) != tuple(cfg.semi_axes):
        raise ValueError("mean data were sampled on a different ellipsoid than the config")
    return reconstruct(data, cfg.volume_grid(), integrand=cfg.integrand,
                       quadrature=cfg.quadrature, oversample=cfg.oversample,
                       threads=cfg.threads)


def evaluate(image: ReconImage, truth: ReconImage) -> dict[str, float]:
    """Relative errors of ``image`` against ``truth`` (see :func:`compare_volumes`)."""
    grid = image.grid
    interior = grid.mask & (grid.normalized_radius() < INTERIOR_RADIUS)
    return compare_volumes(image.values, truth.values, grid.mask, interior)
