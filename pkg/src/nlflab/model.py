"""Core types: functional parameters, 1-D domains, function variants, local energies.

Everything downstream (band measures, evaluators, dyadic machinery, experiments)
is phrased in terms of the small vocabulary defined here.  All containers are
frozen; evaluators treat them as immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

FloatArray = np.ndarray


# ----------------------------------------------------------------------------
# errors


class DomainError(ValueError):
    """Evaluation point lies outside the function's domain."""


class UnsupportedVariantError(TypeError):
    """Operation does not support this function variant."""


class HypothesisError(ValueError):
    """A stated hypothesis of the underlying inequality is violated.

    The message names the violated hypothesis so callers can report it.
    """


class PreconditionError(ValueError):
    """An operation precondition (resolution, grid shape, ...) is violated."""


# ----------------------------------------------------------------------------
# parameters and domains


@dataclass(frozen=True, slots=True)
class FunctionalParams:
    """Parameters (gamma, p, lam) of the threshold-exceedance energy.

    gamma > 0 is the kernel exponent, p >= 1 the growth exponent, lam > 0 the
    threshold level.  ``dim`` is the ambient dimension (1 unless slicing).
    """

    gamma: float
    p: float
    lam: float
    dim: int = 1

    def __post_init__(self) -> None:
        if not (self.gamma > 0):
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not (self.p >= 1):
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not (self.lam > 0):
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    @property
    def threshold_exponent(self) -> float:
        """Exponent 1 + gamma/p of the separation threshold lam * d^(1+gamma/p)."""
        return 1.0 + self.gamma / self.p

    @property
    def radius_exponent(self) -> float:
        """Exponent p/(p+gamma) of the exceedance radius (delta_u/lam)^(p/(p+gamma))."""
        return self.p / (self.p + self.gamma)

    def with_lam(self, lam: float) -> "FunctionalParams":
        return FunctionalParams(self.gamma, self.p, lam, self.dim)


def _check_interval(iv: Sequence[float]) -> tuple[float, float]:
    a, b = float(iv[0]), float(iv[1])
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError(f"interval must be finite with a < b, got ({a}, {b})")
    return (a, b)


@dataclass(frozen=True)
class Domain1D:
    """Finite union of disjoint bounded open intervals, kept sorted."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        ivs = tuple(_check_interval(iv) for iv in self.intervals)
        if not ivs:
            raise ValueError("domain needs at least one interval")
        for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
            if not b0 <= a1:
                raise ValueError(f"intervals must be disjoint and sorted: ({a0},{b0}) vs ({a1},{b1})")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def single(cls, a: float, b: float) -> "Domain1D":
        return cls(((a, b),))

    @property
    def length(self) -> float:
        return sum(b - a for a, b in self.intervals)

    @property
    def span(self) -> tuple[float, float]:
        return (self.intervals[0][0], self.intervals[-1][1])

    def contains(self, x: FloatArray) -> FloatArray:
        """Vectorized open-interval membership test."""
        x = np.asarray(x)
        inside = np.zeros(x.shape, dtype=bool)
        for a, b in self.intervals:
            inside |= (x > a) & (x < b)
        return inside


# ----------------------------------------------------------------------------
# 1-D function variants
#
# Step-like variants (Step, GridSamples, CantorApproximant, Indicator) expose
# an exact step view through as_step(); the exact band evaluator relies on it.
# Step functions are right-continuous: u(x) is the value of the piece to the
# right of a breakpoint.


class Function1D:
    """Base class for 1-D function variants."""

    def evaluate(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.evaluate(x)

    def as_step(self) -> "StepFunction":
        raise UnsupportedVariantError(f"{type(self).__name__} has no exact step representation")

    @property
    def is_step_like(self) -> bool:
        return False

    def lipschitz_bound(self) -> Union[float, None]:
        """Global Lipschitz constant if one is known, else None."""
        return None

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        """(min, max) of the function over the domain closure."""
        raise NotImplementedError

    def oscillation_on(self, dom: Domain1D) -> float:
        lo, hi = self.range_on(dom)
        return hi - lo


@dataclass(frozen=True)
class StepFunction(Function1D):
    """Right-continuous step function: value ``values[i]`` on [bp[i-1], bp[i])."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        bp = tuple(float(t) for t in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(bp) + 1:
            raise ValueError("need len(values) == len(breakpoints) + 1")
        if any(t1 <= t0 for t0, t1 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def evaluate(self, x):
        idx = np.searchsorted(np.asarray(self.breakpoints), np.asarray(x, dtype=float), side="right")
        return np.asarray(self.values)[idx]

    def as_step(self) -> "StepFunction":
        return self

    @property
    def is_step_like(self) -> bool:
        return True

    def pieces_on(self, interval: tuple[float, float]) -> list[tuple[float, float, float]]:
        """Constancy pieces (start, end, value) covering one open interval."""
        a, b = interval
        bp = np.asarray(self.breakpoints)
        vals = self.values
        cuts = [a] + [float(t) for t in bp if a < t < b] + [b]
        out = []
        for s, e in zip(cuts, cuts[1:]):
            i = int(np.searchsorted(bp, 0.5 * (s + e), side="right"))
            out.append((s, e, vals[i]))
        return out

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        vs = [v for iv in dom.intervals for _, _, v in self.pieces_on(iv)]
        return (min(vs), max(vs))


@dataclass(frozen=True)
class PiecewiseLinear(Function1D):
    """Continuous piecewise-linear interpolant through (knots, values)."""

    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        kn = tuple(float(t) for t in self.knots)
        vals = tuple(float(v) for v in self.values)
        if len(kn) < 2 or len(kn) != len(vals):
            raise ValueError("need >= 2 knots and len(values) == len(knots)")
        if any(t1 <= t0 for t0, t1 in zip(kn, kn[1:])):
            raise ValueError("knots must be strictly increasing")
        object.__setattr__(self, "knots", kn)
        object.__setattr__(self, "values", vals)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.knots[0], self.knots[-1]
        if np.any(x < lo) or np.any(x > hi):
            raise DomainError(f"point outside piecewise-linear domain [{lo}, {hi}]")
        return np.interp(x, self.knots, self.values)

    def lipschitz_bound(self) -> float:
        slopes = np.diff(self.values) / np.diff(self.knots)
        return float(np.max(np.abs(slopes)))

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        # extrema of a PL function occur at knots or at clipped segment ends
        pts = []
        for a, b in dom.intervals:
            pts.extend([a, b])
            pts.extend(t for t in self.knots if a < t < b)
        ys = self.evaluate(np.asarray(pts))
        return (float(np.min(ys)), float(np.max(ys)))


@dataclass(frozen=True)
class GridSamples(Function1D):
    """Uniform grid samples on an interval, nearest-node piecewise-constant.

    Samples sit at the n >= 2 uniformly spaced nodes including the interval
    endpoints; evaluation returns the value of the nearest node, so the induced
    exact step view has breakpoints at midpoints between adjacent nodes.
    """

    interval: tuple[float, float]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        iv = _check_interval(self.interval)
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("need at least 2 samples")
        object.__setattr__(self, "interval", iv)
        object.__setattr__(self, "values", vals)

    @property
    def nodes(self) -> FloatArray:
        a, b = self.interval
        return np.linspace(a, b, len(self.values))

    def evaluate(self, x):
        a, b = self.interval
        x = np.asarray(x, dtype=float)
        if np.any(x < a) or np.any(x > b):
            raise DomainError(f"point outside sample interval [{a}, {b}]")
        return self.as_step().evaluate(x)

    def as_step(self) -> StepFunction:
        nodes = self.nodes
        mids = 0.5 * (nodes[:-1] + nodes[1:])
        return StepFunction(tuple(mids), self.values)

    @property
    def is_step_like(self) -> bool:
        return True

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        return self.as_step().range_on(dom)


@dataclass(frozen=True)
class LinearRamp(Function1D):
    """u(x) = slope * x on the whole line."""

    slope: float

    def evaluate(self, x):
        return self.slope * np.asarray(x, dtype=float)

    def lipschitz_bound(self) -> float:
        return abs(self.slope)

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        a, b = dom.span
        lo, hi = self.slope * a, self.slope * b
        return (min(lo, hi), max(lo, hi))


def _cantor_interval_lefts(level: int) -> FloatArray:
    lefts = np.array([0.0])
    width = 1.0
    for _ in range(level):
        width /= 3.0
        lefts = np.sort(np.concatenate([lefts, lefts + 2.0 * width]))
    return lefts


@dataclass(frozen=True)
class CantorApproximant(Function1D):
    """Middle-thirds staircase at a finite level, as a step function.

    Level m places 2^m equal jumps of size 2^-m at the midpoints of the 2^m
    surviving level-m intervals of the middle-thirds construction.  The result
    is within 2^-m of the Cantor function uniformly, takes the familiar plateau
    value 1/2 on the middle third already at level 1, and has total variation
    exactly 1 at every level.
    """

    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be >= 0")

    def as_step(self) -> StepFunction:
        lefts = _cantor_interval_lefts(self.level)
        width = 3.0 ** (-self.level)
        mids = lefts + 0.5 * width
        n = len(mids)
        vals = np.arange(n + 1) / float(n)
        return StepFunction(tuple(mids), tuple(vals))

    def evaluate(self, x):
        return self.as_step().evaluate(x)

    @property
    def is_step_like(self) -> bool:
        return True

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        return self.as_step().range_on(dom)


@dataclass(frozen=True)
class Indicator(Function1D):
    """Indicator of an interval: 1 inside, 0 outside."""

    interval: tuple[float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "interval", _check_interval(self.interval))

    def as_step(self) -> StepFunction:
        s, e = self.interval
        return StepFunction((s, e), (0.0, 1.0, 0.0))

    def evaluate(self, x):
        return self.as_step().evaluate(x)

    @property
    def is_step_like(self) -> bool:
        return True

    def range_on(self, dom: Domain1D) -> tuple[float, float]:
        return self.as_step().range_on(dom)


ANALYTIC_VARIANTS = (LinearRamp, CantorApproximant, Indicator)


def evaluate(f: Function1D, x):
    """Evaluate a function variant at x (scalar or array)."""
    return f.evaluate(x)


# ----------------------------------------------------------------------------
# local energies and BV decomposition


@dataclass(frozen=True)
class BVDecomposition:
    """Split of the distributional-derivative mass into ac / jump / Cantor parts."""

    ac: float
    jump: float
    cantor: float

    @property
    def total(self) -> float:
        return self.ac + self.jump + self.cantor


def _interior_jumps(step: StepFunction, dom: Domain1D) -> list[float]:
    jumps = []
    for a, b in dom.intervals:
        for t, v0, v1 in zip(step.breakpoints, step.values, step.values[1:]):
            if a < t < b and v1 != v0:
                jumps.append(abs(v1 - v0))
    return jumps


def _pl_segments(f: PiecewiseLinear, dom: Domain1D) -> list[tuple[float, float]]:
    """(|slope|, clipped length) for each knot segment intersecting the domain."""
    out = []
    kn, vals = f.knots, f.values
    for a, b in dom.intervals:
        for (x0, x1), (y0, y1) in zip(zip(kn, kn[1:]), zip(vals, vals[1:])):
            lo, hi = max(x0, a), min(x1, b)
            if hi > lo:
                out.append((abs((y1 - y0) / (x1 - x0)), hi - lo))
    return out


def local_energy(f: Function1D, dom: Domain1D, p: float) -> float:
    """Local energy F_p of a variant over a domain.

    For p > 1 this is int |u'|^p when the variant lies in W^{1,p} and +inf
    otherwise; for p = 1 it is the total variation |Du|.  Grid samples return
    the discrete Riemann energy sum |du/dx|^p dx on their own grid (they stand
    for a resolution-limited observation, not a genuine BV function).  The
    staircase approximant counts as a step function here: finite variation at
    p = 1, energy +inf for p > 1.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if isinstance(f, LinearRamp):
        return abs(f.slope) ** p * dom.length
    if isinstance(f, PiecewiseLinear):
        return float(sum(s**p * ell for s, ell in _pl_segments(f, dom)))
    if isinstance(f, GridSamples):
        nodes = f.nodes
        h = nodes[1] - nodes[0]
        vals = np.asarray(f.values)
        keep = [
            i
            for i in range(len(nodes) - 1)
            if any(a <= nodes[i] and nodes[i + 1] <= b for a, b in dom.intervals)
        ]
        return float(sum(abs(vals[i + 1] - vals[i]) ** p / h ** (p - 1.0) for i in keep))
    if f.is_step_like:
        jumps = _interior_jumps(f.as_step(), dom)
        if p == 1:
            return float(sum(jumps))
        return math.inf if jumps else 0.0
    raise UnsupportedVariantError(f"local_energy does not handle {type(f).__name__}")


def bv_decompose(f: Function1D, dom: Domain1D) -> BVDecomposition:
    """Decompose the derivative mass of a variant over a domain.

    Step functions and indicators carry pure jump mass; ramps and piecewise
    linears carry pure absolutely-continuous mass; the staircase approximant
    files its variation under the Cantor part by convention (it approximates a
    purely Cantor derivative, and tagging its finite-level jumps as jump mass
    would make every sweep reference discontinuous in the level).  Grid samples
    do not decompose: the sampling hides which part the variation belongs to.
    """
    if isinstance(f, GridSamples):
        raise UnsupportedVariantError("grid samples carry no BV decomposition")
    if isinstance(f, CantorApproximant):
        tv = sum(_interior_jumps(f.as_step(), dom))
        return BVDecomposition(ac=0.0, jump=0.0, cantor=float(tv))
    if isinstance(f, LinearRamp) or isinstance(f, PiecewiseLinear):
        return BVDecomposition(ac=local_energy(f, dom, 1.0), jump=0.0, cantor=0.0)
    if f.is_step_like:
        return BVDecomposition(ac=0.0, jump=float(sum(_interior_jumps(f.as_step(), dom))), cantor=0.0)
    raise UnsupportedVariantError(f"bv_decompose does not handle {type(f).__name__}")


def fp_from_points(xs: Sequence[float], us: Sequence[float], p: float) -> float:
    """Discrete local energy sum |u_{i+1}-u_i|^p / (x_{i+1}-x_i)^(p-1).

    The points must be strictly increasing in x; duplicated abscissae have no
    well-defined discrete slope and raise.
    """
    xs = np.asarray(xs, dtype=float)
    us = np.asarray(us, dtype=float)
    if xs.ndim != 1 or xs.shape != us.shape or len(xs) < 2:
        raise PreconditionError("need matching 1-D arrays with at least 2 points")
    dx = np.diff(xs)
    if np.any(dx <= 0):
        raise PreconditionError("abscissae must be strictly increasing (no duplicates)")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(np.sum(np.abs(np.diff(us)) ** p / dx ** (p - 1.0)))
