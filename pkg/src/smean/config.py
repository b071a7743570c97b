"""Run configuration read from YAML.

Recognised keys (everything except ``semi_axes`` and ``phantom`` is optional)::

    n: 2                       # must equal len(semi_axes) when given
    semi_axes: [1.0, 0.7]
    phantom:                   # list of radial bumps
      - center: [0.2, -0.1]
        radius: 0.25
        amplitude: 1.0         # default 1.0
    direction_order: 256       # sphere quadrature order
    n_radii: 512
    r_max: null                # null: diam(E) * n_radii / (n_radii - 2)
    grid_shape: 161            # int or one count per axis
    grid_margin: 0.0
    pipeline: auto             # auto | even | odd (must match the parity of n)
    integrand: proof           # proof | theorem (odd n only)
    quadrature: product        # product | midpoint (even n only)
    forward_method: analytic   # analytic | quadrature
    oversample: 1.0
    tolerances: {l2: 0.10, linf: 0.15}
    seed: 0
    threads: 1
    output_dir: out
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np
import yaml

from .forward import RadialGrid
from .geometry import Ellipsoid
from .phantom import Phantom, RadialBump
from .reconstruction import INTEGRANDS, QUADRATURES, VolumeGrid

__all__ = ["RunConfig", "ConfigError", "parse_config", "load_config"]

PIPELINES = ("auto", "even", "odd")
FORWARD_METHODS = ("analytic", "quadrature")
BUMP_KEYS = ("center", "radius", "amplitude")
TOLERANCE_KEYS = ("l2", "linf", "l2_full", "linf_full", "l2_interior", "linf_interior")

_DEFAULT_DIRECTIONS = {2: 256}
_DEFAULT_RADII = {2: 512}
_DEFAULT_GRID = {2: 161, 3: 49}


class ConfigError(ValueError):
    """Raised for unknown keys or violated configuration constraints."""


@dataclass
class RunConfig:
    semi_axes: tuple[float, ...]
    bumps: list[RadialBump]
    direction_order: int
    n_radii: int
    r_max: float | None = None
    grid_shape: tuple[int, ...] = ()
    grid_margin: float = 0.0
    pipeline: str = "auto"
    integrand: str = "proof"
    quadrature: str = "product"
    forward_method: str = "analytic"
    oversample: float = 1.0
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    threads: int = 1
    output_dir: str = "out"

    @property
    def n(self) -> int:
        return len(self.semi_axes)

    def geometry(self) -> Ellipsoid:
        return Ellipsoid(self.semi_axes)

    def phantom(self) -> Phantom:
        return Phantom(self.bumps, self.geometry())

    def radial_grid(self) -> RadialGrid:
        if self.r_max is None:
            return RadialGrid.staggered_for(self.geometry(), self.n_radii)
        return RadialGrid.staggered(self.r_max, self.n_radii)

    def volume_grid(self) -> VolumeGrid:
        return VolumeGrid(self.geometry(), self.grid_shape, self.grid_margin)

    @property
    def resolved_pipeline(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "bumps":
                out["phantom"] = [{"center": list(map(float, b.center)), "radius": float(b.radius),
                                   "amplitude": float(b.amplitude)} for b in value]
            elif isinstance(value, tuple):
                out[f.name] = list(value)
            else:
                out[f.name] = value
        out["n"] = self.n
        return out


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or int(value) != value or int(value) <= 0:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _choice(name: str, value, options) -> str:
    if value not in options:
        raise ConfigError(f"{name} must be one of {options}, got {value!r}")
    return value


def _parse_bump(i: int, raw, n: int) -> RadialBump:
    if not isinstance(raw, dict):
        raise ConfigError(f"phantom[{i}] must be a mapping")
    for key in raw:
        if key not in BUMP_KEYS:
            raise ConfigError(f"unknown key 'phantom[{i}].{key}'")
    if "center" not in raw or "radius" not in raw:
        raise ConfigError(f"phantom[{i}] needs 'center' and 'radius'")
    center = tuple(float(c) for c in raw["center"])
    if len(center) != n:
        raise ConfigError(f"phantom[{i}].center has {len(center)} entries, expected {n}")
    radius = float(raw["radius"])
    if not radius > 0:
        raise ConfigError(f"phantom[{i}].radius must be positive")
    return RadialBump(center, radius, float(raw.get("amplitude", 1.0)))


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping of keys to values")
    known = {f.name for f in fields(RunConfig)} - {"bumps"} | {"n", "phantom"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown key {key!r}")

    if "semi_axes" not in raw:
        raise ConfigError("missing required key 'semi_axes'")
    semi_axes = tuple(float(a) for a in raw["semi_axes"])
    n = len(semi_axes)
    if n < 2:
        raise ConfigError("dimension n must be at least 2")
    if "n" in raw and _positive_int("n", raw["n"]) != n:
        raise ConfigError(f"n = {raw['n']} does not match {n} semi-axes")
    if any(not a > 0 for a in semi_axes):
        raise ConfigError("semi_axes must be positive")

    pipeline = _choice("pipeline", raw.get("pipeline", "auto"), PIPELINES)
    parity = "even" if n % 2 == 0 else "odd"
    if pipeline != "auto" and pipeline != parity:
        raise ConfigError(f"parity mismatch: pipeline {pipeline!r} requested for n = {n} ({parity})")

    bumps_raw = raw.get("phantom")
    if not isinstance(bumps_raw, list) or not bumps_raw:
        raise ConfigError("'phantom' must be a non-empty list of bumps")
    bumps = [_parse_bump(i, b, n) for i, b in enumerate(bumps_raw)]
    geometry = Ellipsoid(semi_axes)
    for i, b in enumerate(bumps):
        if b.support_margin(geometry) <= 0:
            raise ConfigError(f"phantom[{i}] violates the support-margin rule "
                              "|A^-1 c| + rho0/min(a) < 1")

    n_radii = _positive_int("n_radii", raw.get("n_radii", _DEFAULT_RADII.get(n, 384)))
    if n_radii < 4:
        raise ConfigError("n_radii must be at least 4")
    r_max = raw.get("r_max")
    if r_max is not None:
        r_max = float(r_max)
        if not r_max >= geometry.diameter:
            raise ConfigError(f"r_max = {r_max} must be at least the diameter {geometry.diameter}")

    shape = raw.get("grid_shape", _DEFAULT_GRID.get(n, 17))
    shape = tuple(np.broadcast_to(np.atleast_1d(shape), (n,)).tolist()) if np.ndim(shape) == 0 \
        else tuple(shape)
    if len(shape) != n:
        raise ConfigError(f"grid_shape has {len(shape)} entries, expected {n}")
    shape = tuple(_positive_int("grid_shape", s) for s in shape)
    if min(shape) < 3:
        raise ConfigError("grid_shape needs at least 3 nodes per axis")

    margin = float(raw.get("grid_margin", 0.0))
    if margin < 0:
        raise ConfigError("grid_margin must be non-negative")
    oversample = float(raw.get("oversample", 1.0))
    if not oversample > 0:
        raise ConfigError("oversample must be positive")

    tolerances = raw.get("tolerances") or {}
    if not isinstance(tolerances, dict):
        raise ConfigError("tolerances must be a mapping")
    for key in tolerances:
        if key not in TOLERANCE_KEYS:
            raise ConfigError(f"unknown key 'tolerances.{key}'")
    tolerances = {k: float(v) for k, v in tolerances.items()}

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")

    return RunConfig(
        semi_axes=semi_axes,
        bumps=bumps,
        direction_order=_positive_int("direction_order", raw.get("direction_order",
                                                                 _DEFAULT_DIRECTIONS.get(n, 24))),
        n_radii=n_radii,
        r_max=r_max,
        grid_shape=shape,
        grid_margin=margin,
        pipeline=pipeline,
        integrand=_choice("integrand", raw.get("integrand", "proof"), INTEGRANDS),
        quadrature=_choice("quadrature", raw.get("quadrature", "product"), QUADRATURES),
        forward_method=_choice("forward_method", raw.get("forward_method", "analytic"), FORWARD_METHODS),
        oversample=oversample,
        tolerances=tolerances,
        seed=int(seed),
        threads=_positive_int("threads", raw.get("threads", 1)),
        output_dir=str(raw.get("output_dir", "out")),
    )


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())
