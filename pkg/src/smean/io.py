"""Flat binary volume files, PGM slices and CSV output.

Volume layout: an ASCII header

    SMEAN1
    ndim <n>
    shape <N_1> ... <N_n>
    spacing <h_1> ... <h_n>
    origin <o_1> ... <o_n>
    payload <tag>
    [semi_axes <a_1> ... <a_m>]
    [extra key value lines]
    end

followed by prod(shape) little-endian float64 values in row-major order.
Floats in the header use ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io as _io
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from .forward import MeanData, RadialGrid
from .geometry import Ellipsoid, build_sphere_quadrature
from .reconstruction import ReconImage, VolumeGrid

__all__ = [
    "MAGIC",
    "VolumeFile",
    "write_volume",
    "read_volume",
    "export_slice_pgm",
    "write_csv",
]

log = logging.getLogger(__name__)

MAGIC = "SMEAN1"
PAYLOADS = ("phantom", "backprojected", "laplacian-applied", "means", "filtered", "raw")


@dataclass
class VolumeFile:
    values: np.ndarray
    spacing: tuple[float, ...]
    origin: tuple[float, ...]
    payload: str = "raw"
    semi_axes: tuple[float, ...] | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype="<f8")
        self.spacing = tuple(float(s) for s in self.spacing)
        self.origin = tuple(float(o) for o in self.origin)
        if len(self.spacing) != self.values.ndim or len(self.origin) != self.values.ndim:
            raise ValueError("spacing/origin length must match the array dimension")
        if self.payload not in PAYLOADS:
            raise ValueError(f"unknown payload tag {self.payload!r}")

    @classmethod
    def from_image(cls, image: ReconImage, payload: str | None = None) -> "VolumeFile":
        grid = image.grid
        return cls(image.values, tuple(grid.spacing), tuple(grid.lower), payload or image.stage,
                   grid.geometry.semi_axes, {"margin": repr(float(grid.margin))})

    @classmethod
    def from_mean_data(cls, data: MeanData) -> "VolumeFile":
        return cls(data.values, (1.0, data.radii.dr), (0.0, data.radii.r0), "means",
                   data.geometry.semi_axes,
                   {"direction_order": str(data.directions.order),
                    "staggered": str(int(data.radii.staggered))})

    def grid(self) -> VolumeGrid:
        if self.semi_axes is None:
            raise ValueError("volume header carries no semi_axes")
        return VolumeGrid(Ellipsoid(self.semi_axes), self.values.shape,
                          float(self.extra.get("margin", 0.0)))

    def to_image(self) -> ReconImage:
        grid = self.grid()
        stage = self.payload if self.payload in ("backprojected", "laplacian-applied") else "laplacian-applied"
        return ReconImage(grid, self.values.copy(), stage, grid.mask)

    def to_mean_data(self) -> MeanData:
        if self.payload != "means" or self.semi_axes is None:
            raise ValueError("volume does not hold spherical-mean data")
        geometry = Ellipsoid(self.semi_axes)
        directions = build_sphere_quadrature(geometry.n, int(self.extra["direction_order"]))
        K = self.values.shape[1]
        dr = self.spacing[1]
        staggered = bool(int(self.extra.get("staggered", 1)))
        # rebuild the nodes exactly as the staggered constructors do
        r = (np.arange(K) + 0.5) * dr if staggered else self.origin[1] + dr * np.arange(K)
        radii = RadialGrid(r, dr, staggered)
        return MeanData(geometry, directions, radii, self.values.copy())


def _fmt(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def encode_volume(vol: VolumeFile) -> bytes:
    lines = [
        MAGIC,
        f"ndim {vol.values.ndim}",
        "shape " + " ".join(str(s) for s in vol.values.shape),
        "spacing " + _fmt(vol.spacing),
        "origin " + _fmt(vol.origin),
        f"payload {vol.payload}",
    ]
    if vol.semi_axes is not None:
        lines.append("semi_axes " + _fmt(vol.semi_axes))
    for key in sorted(vol.extra):
        value = str(vol.extra[key])
        if not key.isidentifier() or "\n" in value:
            raise ValueError(f"bad header entry {key!r}")
        lines.append(f"{key} {value}")
    lines.append("end")
    header = ("\n".join(lines) + "\n").encode("ascii")
    return header + np.ascontiguousarray(vol.values, dtype="<f8").tobytes(order="C")


def decode_volume(blob: bytes) -> VolumeFile:
    stream = _io.BytesIO(blob)
    magic = stream.readline().decode("ascii", "replace").strip()
    if magic != MAGIC:
        raise ValueError(f"not a volume file: magic {magic!r} != {MAGIC!r}")
    fields = {}
    while True:
        line = stream.readline()
        if not line:
            raise ValueError("truncated volume header (no 'end' line)")
        text = line.decode("ascii").strip()
        if text == "end":
            break
        key, _, value = text.partition(" ")
        fields[key] = value
    try:
        ndim = int(fields.pop("ndim"))
        shape = tuple(int(s) for s in fields.pop("shape").split())
        spacing = tuple(float(s) for s in fields.pop("spacing").split())
        origin = tuple(float(s) for s in fields.pop("origin").split())
        payload = fields.pop("payload")
    except KeyError as exc:
        raise ValueError(f"volume header is missing {exc.args[0]!r}") from None
    if len(shape) != ndim:
        raise ValueError("header shape does not match ndim")
    semi = fields.pop("semi_axes", None)
    semi_axes = tuple(float(s) for s in semi.split()) if semi else None
    body = stream.read()
    expected = int(np.prod(shape)) * 8
    if len(body) != expected:
        raise ValueError(f"volume payload has {len(body)} bytes, expected {expected}")
    values = np.frombuffer(body, dtype="<f8").reshape(shape).copy()
    return VolumeFile(values, spacing, origin, payload, semi_axes, fields)


def write_volume(path, obj) -> VolumeFile:
    """Write a ReconImage, MeanData or VolumeFile to ``path``."""
    if isinstance(obj, ReconImage):
        vol = VolumeFile.from_image(obj)
    elif isinstance(obj, MeanData):
        vol = VolumeFile.from_mean_data(obj)
    elif isinstance(obj, VolumeFile):
        vol = obj
    else:
        raise TypeError(f"cannot write {type(obj).__name__} as a volume")
    blob = encode_volume(vol)
    with open(path, "wb") as fh:
        fh.write(blob)
    return vol


def read_volume(path) -> VolumeFile:
    with open(path, "rb") as fh:
        return decode_volume(fh.read())


def _slice2d(values: np.ndarray, axis: int | None, index: int | None) -> np.ndarray:
    if values.ndim == 2:
        return values
    if values.ndim != 3:
        raise ValueError("slices can only be taken from 2-D or 3-D volumes")
    axis = 2 if axis is None else axis
    if not 0 <= axis < 3:
        raise ValueError(f"axis {axis} out of range")
    size = values.shape[axis]
    index = size // 2 if index is None else index
    if not 0 <= index < size:
        raise IndexError(f"slice index {index} out of range for axis of length {size}")
    return np.take(values, index, axis=axis)


def export_slice_pgm(image, path, axis: int | None = None, index: int | None = None,
                     vmin: float | None = None, vmax: float | None = None) -> bytes:
    """Write a binary (P5) PGM of a 2-D slice with linear windowing to 0..255.

    ``image`` is a ReconImage, VolumeFile or array.  A degenerate window
    (vmin == vmax) yields an all-zero image and logs a warning.
    """
    values = image.values if hasattr(image, "values") else np.asarray(image, dtype=float)
    plane = _slice2d(np.asarray(values, dtype=float), axis, index)
    lo = float(plane.min()) if vmin is None else float(vmin)
    hi = float(plane.max()) if vmax is None else float(vmax)
    if hi == lo:
        log.warning("degenerate PGM window [%g, %g]; writing an all-zero image", lo, hi)
        pixels = np.zeros(plane.shape, dtype=np.uint8)
    else:
        scaled = np.clip((plane - lo) / (hi - lo), 0.0, 1.0)
        pixels = np.rint(255.0 * scaled).astype(np.uint8)
    # rows of the PGM run along the first array axis
    rows, cols = pixels.shape
    blob = f"P5\n{cols} {rows}\n255\n".encode("ascii") + pixels.tobytes()
    if path is not None:
        with open(path, "wb") as fh:
            fh.write(blob)
    return blob


def write_csv(path, header, rows) -> str:
    """Write rows under a header row (``path=None`` only returns the text)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if path is not None:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def report_rows(reports):
    for r in reports:
        params = json.dumps(r.params, sort_keys=True, default=float)
        yield [r.name, repr(float(r.error)), repr(float(r.tolerance)), str(r.passed).lower(), params]


REPORT_HEADER = ["check", "error", "tolerance", "pass", "params"]
