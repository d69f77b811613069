"""Peak detection on sampled sweeps (analysis helper, not part of the CLI output)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks, peak_widths

PROMINENCE_FRACTION = 0.05


@dataclass(frozen=True)
class Peak:
    center: float
    height: float  # above baseline
    prominence: float
    fwhm: float


def detect_peaks(x, y, fraction: float = PROMINENCE_FRACTION, baseline: float | None = None,
                 ref_height: float | None = None, floor: float = 0.0) -> list[Peak]:
    """Local maxima with prominence above ``fraction`` of the global maximum.

    The baseline (default: median of ``y``) is subtracted first.  The FWHM is
    the width at half prominence with linear interpolation between samples.
    ``ref_height`` replaces the global maximum when several windows are
    compared against a common yardstick.  ``floor`` is an absolute minimum
    prominence, so that a flat signal made of rounding noise yields no peaks.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if baseline is None:
        baseline = float(np.median(y))
    b = y - baseline
    top = float(b.max()) if ref_height is None else ref_height
    if top <= floor:
        return []
    idx, props = find_peaks(b, prominence=max(fraction * top, floor))
    if len(idx) == 0:
        return []
    _, _, left, right = peak_widths(b, idx, rel_height=0.5, prominence_data=(
        props["prominences"], props["left_bases"], props["right_bases"]))
    # crossing points come out as fractional sample indices
    samples = np.arange(len(x))
    fwhm = np.interp(right, samples, x) - np.interp(left, samples, x)
    return [Peak(float(x[k]), float(b[k]), float(p), float(w))
            for k, p, w in zip(idx, props["prominences"], fwhm)]


def nearest(peaks: list[Peak], x0: float) -> Peak | None:
    if not peaks:
        return None
    return min(peaks, key=lambda p: abs(p.center - x0))
