"""scikit-learn style wrappers around the forward and inverse transforms."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .forward import MeanData, RadialGrid, forward_transform
from .geometry import Ellipsoid, build_sphere_quadrature
from .phantom import DEFAULT_MEAN_ORDER, Phantom, RadialBump
from .reconstruction import INTEGRANDS, QUADRATURES, ReconImage, VolumeGrid, reconstruct
from .validation import check_bump_array, check_mean_array, check_positive_int, check_semi_axes

__all__ = ["SphericalMeanTransform", "EllipsoidBackProjection"]


class _EllipsoidSampling(BaseEstimator):
    """Shared fitting of the ellipsoid, direction rule and radial grid."""

    def _fit_sampling(self):
        axes = check_semi_axes(self.semi_axes)
        order = check_positive_int(self.direction_order, "direction_order")
        k = check_positive_int(self.n_radii, "n_radii", minimum=4)
        self.geometry_ = Ellipsoid(axes)
        self.directions_ = build_sphere_quadrature(self.geometry_.n, order)
        self.radii_ = RadialGrid.staggered_for(self.geometry_, k)
        return self

    @property
    def data_shape_(self) -> tuple[int, int]:
        check_is_fitted(self, "geometry_")
        return len(self.directions_), len(self.radii_)


class SphericalMeanTransform(TransformerMixin, _EllipsoidSampling):
    """Map radial-bump phantoms to spherical means centred on the ellipsoid boundary.

    Parameters
    ----------
    semi_axes : sequence of float
        Semi-axes ``a`` of the ellipsoid.
    direction_order : int
        Order of the product quadrature on the unit sphere.
    n_radii : int
        Number of staggered radial samples covering the diameter.
    method : {"analytic", "quadrature"}
        Closed zonal reduction or brute-force sphere quadrature.
    quad_order : int
        Gauss-Legendre order of the zonal reduction.

    Notes
    -----
    ``transform`` accepts either a list of :class:`Phantom` objects or an
    array whose rows are ``(c_1, ..., c_n, radius[, amplitude])``, one
    single-bump phantom per row.  Each output row is the flattened
    ``(directions, radii)`` table.
    """

    def __init__(self, semi_axes=(1.0, 0.7), direction_order=256, n_radii=512,
                 method="analytic", quad_order=DEFAULT_MEAN_ORDER):
        self.semi_axes = semi_axes
        self.direction_order = direction_order
        self.n_radii = n_radii
        self.method = method
        self.quad_order = quad_order

    def fit(self, X=None, y=None):
        if self.method not in ("analytic", "quadrature"):
            raise ValueError(f"unknown method {self.method!r}")
        return self._fit_sampling()

    def _phantoms(self, X) -> list[Phantom]:
        if isinstance(X, Phantom):
            return [X]
        if isinstance(X, (list, tuple)) and X and all(isinstance(p, Phantom) for p in X):
            return list(X)
        n = self.geometry_.n
        rows = check_bump_array(X, n)
        return [Phantom([RadialBump(row[:n], row[n], row[n + 1])], self.geometry_) for row in rows]

    def mean_data(self, phantom: Phantom) -> MeanData:
        check_is_fitted(self, "geometry_")
        return forward_transform(phantom, self.geometry_, self.directions_, self.radii_,
                                 method=self.method, quad_order=self.quad_order)

    def transform(self, X):
        check_is_fitted(self, "geometry_")
        return np.stack([self.mean_data(p).values.ravel() for p in self._phantoms(X)])


class EllipsoidBackProjection(TransformerMixin, _EllipsoidSampling):
    """Invert spherical means sampled on the ellipsoid boundary.

    Parameters
    ----------
    semi_axes, direction_order, n_radii
        Must match the sampling used to produce the data.
    grid_shape : int or sequence of int
        Nodes per axis of the output grid over the bounding box.
    margin : float
        Padding of the bounding box.
    integrand : {"proof", "theorem"}
        Odd-dimensional integrand (ignored for even n).
    quadrature : {"product", "midpoint"}
        Radial quadrature of the even-dimensional log kernel.
    oversample : float
        Density of the uniform rho grid used by the radial filter, relative
        to the number of radii.
    threads : int
        Worker threads of the back-projector.
    """

    def __init__(self, semi_axes=(1.0, 0.7), direction_order=256, n_radii=512, grid_shape=161,
                 margin=0.0, integrand="proof", quadrature="product", oversample=1.0, threads=1):
        self.semi_axes = semi_axes
        self.direction_order = direction_order
        self.n_radii = n_radii
        self.grid_shape = grid_shape
        self.margin = margin
        self.integrand = integrand
        self.quadrature = quadrature
        self.oversample = oversample
        self.threads = threads

    def fit(self, X=None, y=None):
        if self.integrand not in INTEGRANDS:
            raise ValueError(f"integrand must be one of {INTEGRANDS}")
        if self.quadrature not in QUADRATURES:
            raise ValueError(f"quadrature must be one of {QUADRATURES}")
        self._fit_sampling()
        self.grid_ = VolumeGrid(self.geometry_, self.grid_shape, float(self.margin))
        J, K = self.data_shape_
        self.n_features_in_ = J * K
        return self

    def reconstruct(self, data: MeanData) -> ReconImage:
        check_is_fitted(self, "grid_")
        return reconstruct(data, self.grid_, integrand=self.integrand, quadrature=self.quadrature,
                           oversample=self.oversample, threads=self.threads)

    def transform(self, X):
        """Flattened reconstructions, one row per row of ``X`` (or per MeanData)."""
        check_is_fitted(self, "grid_")
        if isinstance(X, MeanData):
            return self.reconstruct(X).values.ravel()[None, :]
        J, K = self.data_shape_
        X = check_mean_array(X, J, K)
        rows = []
        for row in X:
            data = MeanData(self.geometry_, self.directions_, self.radii_, row.reshape(J, K))
            rows.append(self.reconstruct(data).values.ravel())
        return np.stack(rows)
