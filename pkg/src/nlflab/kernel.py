"""Threshold kernel and exact band measures for the nonlocal energy.

The energy integrates the singular kernel |y-x|^(gamma-N) over the exceedance
set {|u(y)-u(x)| > lam |y-x|^(1+gamma/p)}.  For piecewise-constant u in one
dimension the exceedance set is a finite union of rectangles intersected with
diagonal bands {|y-x| < r}, so the whole functional reduces to closed-form
band measures computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import FunctionalParams, _check_interval


def psi(params: FunctionalParams, separation, increment):
    """Threshold indicator: 1 iff increment > lam * separation^(1+gamma/p).

    The inequality is strict; equal-to-threshold pairs do not count.  Accepts
    scalars or arrays (broadcast), returns bool of the broadcast shape.
    """
    separation = np.asarray(separation, dtype=float)
    increment = np.asarray(increment, dtype=float)
    return increment > params.lam * separation**params.threshold_exponent


def exceedance_radius(params: FunctionalParams, increment: float) -> float:
    """Largest separation at which an increment still exceeds the threshold.

    For increment du > 0 this is (du/lam)^(p/(p+gamma)): pairs closer than this
    radius exceed, pairs at or beyond it do not.  Nonpositive increments never
    exceed and return 0.
    """
    if increment <= 0:
        return 0.0
    return float((increment / params.lam) ** params.radius_exponent)


@dataclass(frozen=True)
class BandRegion:
    """Axis-aligned rectangle of pairs intersected with the band |y - x| < r."""

    x_interval: tuple[float, float]
    y_interval: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_interval", _check_interval(self.x_interval))
        object.__setattr__(self, "y_interval", _check_interval(self.y_interval))
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")


def _segment_integral(alpha: float, beta: float, u: float, v: float, gamma: float) -> float:
    """Integral of (alpha + beta*t) |t|^(gamma-1) over [u, v], 0 not interior."""
    if v <= 0.0:
        # substitute t -> -t
        alpha, beta, u, v = alpha, -beta, -v, -u
    g = (v**gamma - u**gamma) / gamma
    h = (v ** (gamma + 1.0) - u ** (gamma + 1.0)) / (gamma + 1.0)
    return alpha * g + beta * h


def nu_band(gamma: float, region: BandRegion) -> float:
    """Kernel measure of a band region, in closed form.

    Integrates |y-x|^(gamma-1) over {x in X, y in Y, |y-x| < r}.  Writing
    t = y - x, the rectangle contributes the overlap length
    L(t) = |X intersect (Y - t)|, a trapezoid-shaped piecewise-linear profile,
    so the measure is the integral of L(t) |t|^(gamma-1) over (-r, r).  Each
    linear piece integrates exactly against the antiderivatives t^gamma/gamma
    and t^(gamma+1)/(gamma+1); inserting t = 0 as a cut keeps every piece on
    one side of the singularity.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    (x0, x1), (y0, y1) = region.x_interval, region.y_interval
    r = region.radius
    if r == 0.0:
        return 0.0
    corners = sorted((y0 - x1, y0 - x0, y1 - x1, y1 - x0))
    lo, hi = max(corners[0], -r), min(corners[3], r)
    if hi <= lo:
        return 0.0

    def overlap(t: float) -> float:
        return max(0.0, min(x1, y1 - t) - max(x0, y0 - t))

    cuts = sorted({lo, hi} | {t for t in (corners[1], corners[2], 0.0) if lo < t < hi})
    total = 0.0
    for u, v in zip(cuts, cuts[1:]):
        slope = (overlap(v) - overlap(u)) / (v - u)
        mid = 0.5 * (u + v)
        alpha = overlap(mid) - slope * mid
        total += _segment_integral(alpha, slope, u, v, gamma)
    return total
