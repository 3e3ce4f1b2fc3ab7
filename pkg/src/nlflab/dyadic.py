"""Dyadic-scale machinery: discretized functional, classifier, lower bounds.

A ``DyadicSample`` holds function values on the depth-m dyadic grid of an open
interval.  On top of it sit the truncated dyadic functional (with a rigorous
truncation tail carried alongside every value), the visible/important interval
classifier, the closed-form oscillation lower bound, and the representation
integral that reassembles the full 1-D energy from windowed dyadic sums.

Dyadic endpoints are held in float64; that is exact for depths up to ~50, which
is asserted, so no rational arithmetic is needed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .functional1d import Estimate
from .model import (
    Domain1D,
    Function1D,
    FunctionalParams,
    HypothesisError,
    PreconditionError,
    _check_interval,
)

MAX_DEPTH = 50  # float64 represents i/2^k exactly well beyond any usable depth

# Visibility is a strict inequality, and the guarantees below (no visible
# depth-0 intervals, telescoping bounds) lean on increments exactly at the
# threshold counting as not visible.  Corpus parameters of the form
# lam = 2^(1+gamma/p) (B-A) put increments exactly on the threshold, where a
# one-ulp rounding in lam * (delta/2^k)^(1+gamma/p) would flip the strict
# comparison; a few-ulp relative guard resolves ties the way the mathematics
# does.
_REL_GUARD = 1.0 + 8e-16


def _exceeds(increments: np.ndarray, threshold: float) -> np.ndarray:
    return increments > threshold * _REL_GUARD


def dyadic_index_range(interval: tuple[float, float], depth: int) -> tuple[int, int]:
    """Indices (first, last) of depth-m dyadic points strictly inside (a, b)."""
    a, b = interval
    scale = 2**depth
    first = math.floor(a * scale) + 1
    last = math.ceil(b * scale) - 1
    return first, last


def dyadic_index_set(interval: tuple[float, float], k: int) -> range:
    """Indices i of the k-dyadic intervals [i/2^k, (i+1)/2^k] contained in (a, b).

    Containment is closed-in-open and strict on both sides, so e.g. [0, 1] does
    not count as contained in (0, 1).
    """
    a, b = _check_interval(interval)
    if k < 0:
        raise PreconditionError("depth k must be >= 0")
    scale = 2**k
    lo = math.floor(a * scale) + 1
    hi = math.ceil(b * scale) - 1
    return range(lo, hi)


@dataclass(frozen=True, eq=False)
class DyadicSample:
    """Values of v on all depth-m dyadic points strictly inside (a, b)."""

    interval: tuple[float, float]
    depth: int
    first_index: int
    values: np.ndarray

    def __post_init__(self) -> None:
        iv = _check_interval(self.interval)
        if not (0 <= self.depth <= MAX_DEPTH):
            raise PreconditionError(f"depth must be in [0, {MAX_DEPTH}], got {self.depth}")
        first, last = dyadic_index_range(iv, self.depth)
        vals = np.asarray(self.values, dtype=float)
        if self.first_index != first or len(vals) != last - first + 1:
            raise PreconditionError(
                f"values must cover indices [{first}, {last}] of depth {self.depth}"
            )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "interval", iv)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(
        cls, f: Function1D, interval: tuple[float, float], depth: int
    ) -> "DyadicSample":
        first, last = dyadic_index_range(interval, depth)
        qs = np.arange(first, last + 1) / 2.0**depth
        return cls(interval, depth, first, np.asarray(f.evaluate(qs), dtype=float))

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.first_index, self.first_index + len(self.values)) / 2.0**self.depth

    def values_at_depth(self, k: int, lo: int, hi: int) -> np.ndarray:
        """v at the depth-k points lo/2^k, ..., hi/2^k (must lie in the sample)."""
        stride = 2 ** (self.depth - k)
        start = lo * stride - self.first_index
        stop = hi * stride - self.first_index
        if start < 0 or stop >= len(self.values):
            raise PreconditionError("requested dyadic points outside the sample")
        return self.values[start : stop + 1 : stride]

    def sample_range(self) -> tuple[float, float]:
        return float(np.min(self.values)), float(np.max(self.values))


@dataclass(frozen=True)
class SliceWindow:
    """Rescaled window (a-x)/delta, (b-x)/delta of the representation formula."""

    x: float
    delta: float
    a_xd: float
    b_xd: float

    def __post_init__(self) -> None:
        if not (0.5 <= self.delta <= 1.0):
            raise PreconditionError(f"delta must be in [1/2, 1], got {self.delta}")
        if not self.b_xd > self.a_xd:
            raise PreconditionError("window must satisfy b_xd > a_xd")

    @classmethod
    def of(cls, x: float, delta: float, interval: tuple[float, float]) -> "SliceWindow":
        a, b = interval
        return cls(x=x, delta=delta, a_xd=(a - x) / delta, b_xd=(b - x) / delta)


@dataclass(frozen=True)
class DFValue:
    """Truncated dyadic sum plus a rigorous bound on the discarded depths."""

    value: float
    tail: float


def _contained_range(first: int, last: int, stride: int) -> tuple[int, int]:
    """Depth-k interval indices whose endpoints both lie in [first, last] depth-m points."""
    lo = -((-first) // stride)  # ceil(first / stride)
    hi = last // stride - 1  # floor(last / stride) - 1
    return lo, hi


def df(params: FunctionalParams, delta: float, v: DyadicSample) -> DFValue:
    """Truncated dyadic functional of a sample, with its truncation tail.

    Sums over depths k <= m the weighted exceedance counts
    2^(-k(gamma+1)) * #{contained k-dyadic intervals whose endpoint increment
    beats the scale-k threshold}.  Depths beyond the sample contribute at most
    sum_{k>m} (b-a) 2^k / 2^(k(gamma+1)) = (b-a) 2^(-m gamma) / (2^gamma - 1),
    reported as ``tail``.
    """
    if not delta > 0:
        raise PreconditionError(f"delta must be > 0, got {delta}")
    g = params.gamma
    m = v.depth
    a, b = v.interval
    first = v.first_index
    last = first + len(v.values) - 1
    total = 0.0
    for k in range(m + 1):
        stride = 2 ** (m - k)
        lo, hi = _contained_range(first, last, stride)
        if hi < lo:
            continue
        vals = v.values_at_depth(k, lo, hi + 1)
        increments = np.abs(np.diff(vals))
        threshold = params.lam * (delta / 2**k) ** params.threshold_exponent
        total += np.count_nonzero(_exceeds(increments, threshold)) / 2.0 ** (k * (g + 1.0))
    tail = (b - a) * 2.0 ** (-m * g) / (2.0**g - 1.0)
    return DFValue(value=total, tail=tail)


# ----------------------------------------------------------------------------
# visible / important classification


@dataclass(frozen=True, eq=False)
class IntervalClassification:
    """Visible and important interval index sets per depth, inside [alpha, beta].

    ``visible[k]`` and ``important[k]`` hold absolute k-dyadic indices for
    k <= max_depth - 1; importance needs half-interval visibility one level
    deeper, so depth max_depth itself is never certified.
    """

    alpha: int
    beta: int
    visible: dict[int, np.ndarray]
    important: dict[int, np.ndarray]
    max_depth: int

    def weighted_important_count(self, gamma: float) -> float:
        """sum_k |I_k| / 2^(k(gamma+1)), the right-hand side mass of the chain."""
        return float(
            sum(len(idx) / 2.0 ** (k * (gamma + 1.0)) for k, idx in self.important.items())
        )


def classify(
    params: FunctionalParams,
    delta: float,
    v: DyadicSample,
    alpha: int,
    beta: int,
) -> IntervalClassification:
    """Classify dyadic subintervals of [alpha, beta] as visible / important.

    Depths are processed in increasing order.  A k-dyadic interval is visible
    when its endpoint increment of v beats the scale-k threshold; it is
    important when it is not visible, at least one of its halves is visible at
    depth k+1, and no shallower important interval contains it (descendants of
    important intervals are marked excluded as the sweep deepens).

    Requires lam >= 2^(1+gamma/p) * (sample range); below that threshold the
    guarantee "no visible intervals at depth 0" can fail and classification
    refuses to certify anything.
    """
    a, b = v.interval
    if not (float(alpha).is_integer() and float(beta).is_integer()):
        raise PreconditionError("alpha and beta must be integers")
    alpha, beta = int(alpha), int(beta)
    if not (a < alpha < beta < b):
        raise PreconditionError(f"need a < alpha < beta < b, got {a} < {alpha} < {beta} < {b}")
    if not (0.5 <= delta <= 1.0):
        raise PreconditionError(f"delta must be in [1/2, 1], got {delta}")
    lo_v, hi_v = v.sample_range()
    osc = hi_v - lo_v
    required = 2.0**params.threshold_exponent * osc
    if params.lam < required:
        raise HypothesisError(
            f"classification hypothesis lam >= 2^(1+gamma/p)*(B-A) violated: "
            f"lam={params.lam} < {required}"
        )
    m = v.depth
    span = beta - alpha
    # visibility flags for all depths (depth m is needed to certify depth m-1)
    vis: list[np.ndarray] = []
    for k in range(m + 1):
        vals = v.values_at_depth(k, alpha * 2**k, beta * 2**k)
        threshold = params.lam * (delta / 2**k) ** params.threshold_exponent
        vis.append(_exceeds(np.abs(np.diff(vals)), threshold))
    visible: dict[int, np.ndarray] = {}
    important: dict[int, np.ndarray] = {}
    excluded = np.zeros(span, dtype=bool)
    for k in range(m):
        base = alpha * 2**k
        visible[k] = base + np.flatnonzero(vis[k])
        half_visible = vis[k + 1][0::2] | vis[k + 1][1::2]
        imp = ~vis[k] & half_visible & ~excluded
        important[k] = base + np.flatnonzero(imp)
        excluded = np.repeat(excluded | imp, 2)
    return IntervalClassification(
        alpha=alpha, beta=beta, visible=visible, important=important, max_depth=m
    )


def oscillation_lower_bound(
    params: FunctionalParams,
    delta: float,
    A: float,
    B: float,
    alpha: int,
    beta: int,
) -> float:
    """Closed-form oscillation cost: the floor any dyadic sum must pay to climb.

    Returns (B-A)^p / (beta-alpha)^(p-1) / ((2^(gamma+1)-1) lam^p delta^(p+gamma)),
    valid under delta in [1/2, 1] and lam >= 2^(1+gamma/p) (B-A); violations of
    either hypothesis raise with the hypothesis named.
    """
    if B < A:
        raise PreconditionError(f"need B >= A, got A={A}, B={B}")
    if not beta > alpha:
        raise PreconditionError(f"need beta > alpha, got {alpha}, {beta}")
    if not (0.5 <= delta <= 1.0):
        raise HypothesisError(f"hypothesis delta in [1/2, 1] violated: delta={delta}")
    required = 2.0**params.threshold_exponent * (B - A)
    if params.lam < required:
        raise HypothesisError(
            f"hypothesis lam >= 2^(1+gamma/p)*(B-A) violated: lam={params.lam} < {required}"
        )
    if B == A:
        return 0.0
    g, p = params.gamma, params.p
    return (
        (B - A) ** p
        / float(beta - alpha) ** (p - 1.0)
        / ((2.0 ** (g + 1.0) - 1.0) * params.lam**p * delta ** (p + g))
    )


# ----------------------------------------------------------------------------
# representation integral (windowed reassembly of the full energy)


@dataclass(frozen=True)
class RepresentationSpec:
    """Resolution knobs for the representation integral.

    ``depth=None`` picks the smallest sample depth whose integrated truncation
    tail is below ``tail_tol`` (capped at ``max_depth``); the realized tail is
    folded into the reported error regardless.
    """

    n_delta: int = 32
    n_x: int = 32
    depth: int | None = None
    tail_tol: float = 1e-3
    max_depth: int = 22
    threads: int = 1

    def __post_init__(self) -> None:
        if self.n_delta < 2 or self.n_x < 2:
            raise PreconditionError("need n_delta >= 2 and n_x >= 2")
        if self.depth is not None and not (1 <= self.depth <= MAX_DEPTH):
            raise PreconditionError(f"depth must be in [1, {MAX_DEPTH}]")
        if self.threads < 1:
            raise PreconditionError("threads must be >= 1")


def _integrated_tail(params: FunctionalParams, length: float, depth: int) -> float:
    """Exact integral of the per-window df tail over the (delta, x) region."""
    g = params.gamma
    delta_integral = (1.0 - 2.0**-g) / g  # int_{1/2}^1 delta^(gamma-1) d delta
    return (
        2.0
        * params.lam**params.p
        * length
        * 2.0 ** (-depth * g)
        / (2.0**g - 1.0)
        * delta_integral
    )


def _auto_depth(params: FunctionalParams, length: float, spec: RepresentationSpec) -> int:
    for m in range(6, spec.max_depth + 1):
        if _integrated_tail(params, length, m) <= spec.tail_tol:
            return m
    return spec.max_depth


def _representation_pass(
    params: FunctionalParams,
    f: Function1D,
    interval: tuple[float, float],
    depth: int,
    n_delta: int,
    n_x: int,
    threads: int,
) -> float:
    a, b = interval
    deltas = 0.5 + 0.5 * (np.arange(n_delta) + 0.5) / n_delta
    w_delta = 0.5 / n_delta

    def row(j: int) -> float:
        delta = float(deltas[j])
        xs = delta * (np.arange(n_x) + 0.5) / n_x
        acc = 0.0
        for x in xs:
            window = SliceWindow.of(float(x), delta, (a, b))
            first, last = dyadic_index_range((window.a_xd, window.b_xd), depth)
            qs = np.arange(first, last + 1) / 2.0**depth
            pts = np.clip(x + qs * delta, a, b)
            sample = DyadicSample(
                (window.a_xd, window.b_xd), depth, first, np.asarray(f.evaluate(pts), dtype=float)
            )
            acc += df(params, delta, sample).value
        return delta ** (params.gamma - 1.0) * (delta / n_x) * acc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, range(n_delta)))
    else:
        rows = [row(j) for j in range(n_delta)]
    return 2.0 * params.lam**params.p * w_delta * float(sum(rows))


def representation_integral(
    params: FunctionalParams,
    f: Function1D,
    dom: Domain1D,
    spec: RepresentationSpec = RepresentationSpec(),
) -> Estimate:
    """Reassemble the 1-D energy from windowed dyadic sums.

    Numerically integrates
    2 lam^p int_{1/2}^1 d delta delta^(gamma-1) int_0^delta DF(delta, v_{x,delta}) dx
    with midpoint grids on both axes, sampling f at x + q*delta over the dyadic
    q of the window (a-x)/delta, (b-x)/delta.  Midpoint x-sampling avoids
    breakpoint aliasing for step inputs, whose inner integrand is piecewise
    constant in x.  The reported error combines a refinement difference with
    the exactly integrated truncation tail.

    Hypotheses: single-interval domain with b - a >= 1, and lam >= B - A for
    the function's range [A, B] on the domain.
    """
    if len(dom.intervals) != 1:
        raise PreconditionError("representation integral needs a single-interval domain")
    a, b = dom.intervals[0]
    if not b - a >= 1.0:
        raise PreconditionError(f"representation integral needs b - a >= 1, got {b - a}")
    lo, hi = f.range_on(dom)
    if params.lam < hi - lo:
        raise HypothesisError(
            f"representation hypothesis lam >= B-A violated: lam={params.lam} < {hi - lo}"
        )
    depth = spec.depth if spec.depth is not None else _auto_depth(params, b - a, spec)
    tail = _integrated_tail(params, b - a, depth)
    coarse = _representation_pass(
        params, f, (a, b), depth, spec.n_delta, spec.n_x, spec.threads
    )
    fine = _representation_pass(
        params, f, (a, b), depth, 2 * spec.n_delta, 2 * spec.n_x, spec.threads
    )
    return Estimate(value=fine, error=abs(fine - coarse) + tail)


# ----------------------------------------------------------------------------
# randomized corpus generator (shared by the property tests and `verify`)


def random_pinned_walk(
    rng: np.random.Generator,
    interval: tuple[float, float],
    depth: int,
    alpha: int,
    beta: int,
    A: float,
    B: float,
) -> DyadicSample:
    """Random dyadic walk pinned to v(alpha)=A, v(beta)=B, clamped to [A, B].

    Cumulative sums of Uniform(-1,1) increments on the depth-m grid, affinely
    rescaled so the pinned endpoints hit exactly; draws whose alpha-to-beta
    displacement is too small for a well-conditioned rescale are redone.
    """
    if not B > A:
        raise PreconditionError("need B > A")
    first, last = dyadic_index_range(interval, depth)
    n = last - first + 1
    ja = alpha * 2**depth - first
    jb = beta * 2**depth - first
    if not (0 <= ja < jb <= n - 1):
        raise PreconditionError("alpha, beta must be interior dyadic points")
    walk_std = math.sqrt((jb - ja) / 3.0)
    for _ in range(100):
        walk = np.cumsum(rng.uniform(-1.0, 1.0, n))
        displacement = walk[jb] - walk[ja]
        if abs(displacement) >= 0.05 * walk_std:
            break
    vals = A + (B - A) * (walk - walk[ja]) / displacement
    np.clip(vals, A, B, out=vals)
    return DyadicSample(interval, depth, first, vals)
