"""Error metrics between a reconstruction and a reference volume."""

from __future__ import annotations

import numpy as np

__all__ = ["relative_l2", "relative_linf", "compare_volumes", "METRIC_NAMES", "INTERIOR_RADIUS"]

METRIC_NAMES = ("l2", "linf", "l2_full", "linf_full", "l2_interior", "linf_interior")
INTERIOR_RADIUS = 0.8


def _norm_ratio(diff: np.ndarray, ref: np.ndarray, order) -> float:
    num = np.linalg.norm(diff.ravel(), order)
    den = np.linalg.norm(ref.ravel(), order)
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return float(num / den)


def relative_l2(values, reference, mask=None) -> float:
    """||values - reference||_2 / ||reference||_2, optionally over ``mask`` only.

    Returns 0 when both sides vanish and inf when only the reference does.
    """
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if values.shape != reference.shape:
        raise ValueError(f"shape mismatch {values.shape} vs {reference.shape}")
    if mask is not None:
        values, reference = values[mask], reference[mask]
    return _norm_ratio(values - reference, reference, 2)


def relative_linf(values, reference, mask=None) -> float:
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if values.shape != reference.shape:
        raise ValueError(f"shape mismatch {values.shape} vs {reference.shape}")
    if mask is not None:
        values, reference = values[mask], reference[mask]
    return _norm_ratio(values - reference, reference, np.inf)


def compare_volumes(values, reference, mask=None, interior=None) -> dict[str, float]:
    """Relative L2 and Linf errors.

    ``l2``/``linf`` use ``mask`` (the reconstruction mask; the full grid when
    omitted), ``*_full`` always use every node and ``*_interior`` use
    ``interior`` (typically |A^-1 x| < 0.8; falls back to ``mask``).
    """
    interior = mask if interior is None else interior
    return {
        "l2": relative_l2(values, reference, mask),
        "linf": relative_linf(values, reference, mask),
        "l2_full": relative_l2(values, reference),
        "linf_full": relative_linf(values, reference),
        "l2_interior": relative_l2(values, reference, interior),
        "linf_interior": relative_linf(values, reference, interior),
    }
