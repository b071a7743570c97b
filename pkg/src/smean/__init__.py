"""Inversion of spherical means with centres on the boundary of an ellipsoid."""

from .estimators import EllipsoidBackProjection, SphericalMeanTransform
from .forward import MeanData, RadialGrid, darboux_residual, forward_transform, sphere_mean
from .geometry import (
    Ellipsoid,
    SphereQuadrature,
    build_sphere_quadrature,
    fundamental_solution,
    reconstruction_constant,
    sphere_surface_area,
)
from .phantom import Phantom, RadialBump
from .reconstruction import (
    ReconImage,
    VolumeGrid,
    apply_anisotropic_laplacian,
    backproject_even,
    backproject_odd,
    reconstruct,
)
from .filtering import FilteredData, radial_filter

__version__ = "0.1.0"

__all__ = [
    "Ellipsoid",
    "SphereQuadrature",
    "build_sphere_quadrature",
    "fundamental_solution",
    "reconstruction_constant",
    "sphere_surface_area",
    "Phantom",
    "RadialBump",
    "MeanData",
    "RadialGrid",
    "forward_transform",
    "sphere_mean",
    "darboux_residual",
    "FilteredData",
    "radial_filter",
    "VolumeGrid",
    "ReconImage",
    "backproject_even",
    "backproject_odd",
    "apply_anisotropic_laplacian",
    "reconstruct",
    "SphericalMeanTransform",
    "EllipsoidBackProjection",
]
