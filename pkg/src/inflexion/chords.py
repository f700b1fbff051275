"""Chords through data points, residuals from the total chord, trapezoidal sums
and the left/right algebraic-surface profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChordError, InvalidIntervalError
from .model import SampledCurve


@dataclass(frozen=True)
class ChordLine:
    slope: float
    intercept: float

    def __call__(self, x):
        return self.slope * x + self.intercept


def chord(x0: float, y0: float, x1: float, y1: float) -> ChordLine:
    if x0 == x1:
        raise DegenerateChordError(f"vertical chord at x={x0}")
    slope = (y1 - y0) / (x1 - x0)
    return ChordLine(float(slope), float(y0 - slope * x0))


def total_chord(curve: SampledCurve) -> ChordLine:
    return chord(curve.xs[0], curve.ys[0], curve.xs[-1], curve.ys[-1])


def total_residuals(curve: SampledCurve) -> np.ndarray:
    """Vertical distance of each data point above the chord joining the end points.

    The end residuals are pinned to exactly 0 so that argmax/argmin over
    purely convex or concave data lands deterministically on an end point.
    """
    xs, ys = curve.xs, curve.ys
    slope = (ys[-1] - ys[0]) / (xs[-1] - xs[0])
    # anchored at x0 rather than via the intercept to limit cancellation
    resid = (ys - ys[0]) - slope * (xs - xs[0])
    resid[0] = 0.0
    resid[-1] = 0.0
    return resid


def trapezoid(x0: float, y0: float, x1: float, y1: float) -> float:
    if not x0 < x1:
        raise InvalidIntervalError(f"need x0 < x1, got {x0}, {x1}")
    return 0.5 * (y0 + y1) * (x1 - x0)


def _panels(xs, ys):
    return 0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)


def cumulative_trapezoid(xs, ys) -> np.ndarray:
    """Running composite trapezoid ``C[j]`` from ``xs[0]`` to ``xs[j]``, with ``C[0] = 0``.

    Neumaier-compensated so long grids do not accumulate drift.
    """
    panels = _panels(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    out = np.empty(panels.size + 1)
    out[0] = 0.0
    total = 0.0
    comp = 0.0
    for i, v in enumerate(panels.tolist(), start=1):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


def composite_trapezoid(curve: SampledCurve) -> float:
    return float(cumulative_trapezoid(curve.xs, curve.ys)[-1])


@dataclass(frozen=True, eq=False)
class SurfaceProfiles:
    """Trapezoidal signed areas between the data and its left/right chords.

    ``left[j]`` is the area from ``xs[0]`` to ``xs[j]`` under data minus the chord
    through points 0 and j; ``right[j]`` the area from ``xs[j]`` to ``xs[n]`` under
    data minus the chord through points j and n. ``left[0] = right[n] = 0``.
    """

    left: np.ndarray
    right: np.ndarray


def surface_profiles(curve: SampledCurve) -> SurfaceProfiles:
    """Both profiles in O(n) from one prefix sum.

    The trapezoidal integral of a chord over its own span telescopes to the
    single trapezoid on its end points, so each profile entry is a prefix-sum
    difference minus one trapezoid. Working on residuals from the total chord
    instead of raw ordinates gives the same values (trapezoids are exact on
    lines) with less cancellation.
    """
    xs = curve.xs
    phi = total_residuals(curve)
    c = cumulative_trapezoid(xs, phi)
    left = c - 0.5 * (xs - xs[0]) * (phi[0] + phi)
    right = (c[-1] - c) - 0.5 * (xs[-1] - xs) * (phi + phi[-1])
    left[0] = 0.0
    right[-1] = 0.0
    return SurfaceProfiles(left, right)
