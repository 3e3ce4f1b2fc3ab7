"""Built-in verification corpus: fast self-checks behind ``verify``.

Each check is a named pass/fail with a short detail string.  The corpus
re-derives anchor values (constants, the exact step value, scaling
identities), runs a randomized dyadic-walk property sweep, cross-checks the
windowed representation against the exact evaluator, and confirms that the
Monte Carlo sampler is bit-reproducible across thread counts.  Target
runtime is a few seconds; the heavyweight corpora live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import (
    RepresentationSpec,
    classify,
    df,
    oscillation_lower_bound,
    random_pinned_walk,
    representation_integral,
)
from .functional1d import f_bruteforce, f_exact_step, f_quadrature
from .model import Domain1D, FunctionalParams, StepFunction
from .slicing import Box, CoordinateRamp, FunctionND, c_gamma, c_np, f_mc, f_slice_average


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    ok: bool
    detail: str

    def __post_init__(self) -> None:
        # comparisons of numpy scalars produce np.bool_; keep the payload native
        object.__setattr__(self, "ok", bool(self.ok))


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    checks: tuple[VerifyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_payload(self) -> dict:
        return {
            "passed": self.passed,
            "seed": self.seed,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


def _check_constants() -> VerifyCheck:
    facts = [
        (abs(c_np(1, 1) - 2.0), 0.0),
        (abs(c_np(1, 2) - 2.0), 0.0),
        (abs(c_np(2, 1) - 4.0), 1e-8),
        (abs(c_np(2, 2) - math.pi), 1e-8),
        (abs(c_gamma(1.0) - math.log(2.0) / 3.0), 1e-14),
    ]
    worst = max(err - tol for err, tol in facts)
    ok = all(err <= tol for err, tol in facts)
    return VerifyCheck("constants", ok, f"worst excess over tolerance {worst:.2e}")


def _check_step_exact() -> VerifyCheck:
    u = StepFunction((1.0,), (0.0, 1.0))
    dom = Domain1D(((0.0, 2.0),))
    errs = [
        abs(f_exact_step(FunctionalParams(1.0, 1.0, lam), u, dom) - 1.0)
        for lam in (4.0, 16.0, 1e3)
    ]
    ok = max(errs) <= 1e-12
    return VerifyCheck("step_exact", ok, f"max |F - 1| = {max(errs):.2e} over lam in {{4, 16, 1e3}}")


def _random_step(rng: np.random.Generator, a: float, b: float) -> StepFunction:
    for _ in range(100):
        k = int(rng.integers(1, 5))
        pos = np.sort(rng.uniform(a + 0.15 * (b - a), b - 0.15 * (b - a), k))
        vals = rng.uniform(0.0, 1.0, k + 1)
        if (k == 1 or np.min(np.diff(pos)) > 0.05 * (b - a)) and np.min(
            np.abs(np.diff(vals))
        ) > 0.1:
            return StepFunction(tuple(pos), tuple(vals))
    raise RuntimeError("failed to draw a well-separated step function")


def _check_scaling(rng: np.random.Generator) -> VerifyCheck:
    dom = Domain1D(((0.0, 2.0),))
    worst = 0.0
    for _ in range(5):
        u = _random_step(rng, 0.0, 2.0)
        gamma = float(rng.uniform(0.5, 2.0))
        p = float(rng.choice([1.0, 2.0]))
        osc = max(u.values) - min(u.values)
        lam = 2.0 ** (1.0 + gamma / p) * osc * 2.0
        params = FunctionalParams(gamma, p, lam)
        base = f_exact_step(params, u, dom)

        c = 2.5
        scaled = f_exact_step(
            params.with_lam(c * lam),
            StepFunction(u.breakpoints, tuple(c * v for v in u.values)),
            dom,
        )
        worst = max(worst, abs(scaled - c**p * base) / max(abs(base), 1e-30))

        for k in (1, 2):
            lam_k = 2.0 ** (-k * params.threshold_exponent) * lam
            u_k = StepFunction(tuple(2.0**k * t for t in u.breakpoints), u.values)
            dom_k = Domain1D(((0.0, 2.0 ** (k + 1)),))
            inflated = 2.0 ** (k * (p - 1.0)) * f_exact_step(
                params.with_lam(lam_k), u_k, dom_k
            )
            worst = max(worst, abs(inflated - base) / max(abs(base), 1e-30))
    ok = worst <= 1e-10
    return VerifyCheck("scaling_identities", ok, f"worst relative mismatch {worst:.2e}")


def _check_triangle(rng: np.random.Generator) -> VerifyCheck:
    dom = Domain1D(((0.0, 2.0),))
    worst = 0.0
    for _ in range(5):
        u = _random_step(rng, 0.0, 2.0)
        gamma = float(rng.uniform(0.5, 2.0))
        p = float(rng.choice([1.0, 2.0]))
        osc = max(u.values) - min(u.values)
        lam = 2.0 ** (1.0 + gamma / p) * osc
        params = FunctionalParams(gamma, p, lam)
        exact = f_exact_step(params, u, dom)
        quad = f_quadrature(params, u, dom).value
        brute = f_bruteforce(params, u, dom, n=2000)
        scale = max(abs(exact), 1e-30)
        worst = max(worst, abs(quad - exact) / scale, abs(brute - exact) / scale)
    ok = worst <= 0.02
    return VerifyCheck("oracle_triangle", ok, f"worst pairwise relative gap {worst:.2e}")


def _check_walks(rng: np.random.Generator) -> VerifyCheck:
    interval = (-1.0, 2.0)
    n_ok = 0
    n = 50
    worst_ratio = math.inf
    for i in range(n):
        gamma = (0.5, 1.0, 2.0)[i % 3]
        p = (1.0, 2.0)[i % 2]
        delta = (0.5, 0.75, 1.0)[i % 3]
        mult = (1.0, 2.0, 4.0)[(i // 3) % 3]
        depth = 8 + i % 3
        lam = 2.0 ** (1.0 + gamma / p) * 1.0 * mult
        params = FunctionalParams(gamma, p, lam)
        v = random_pinned_walk(rng, interval, depth, 0, 1, 0.0, 1.0)
        bound = oscillation_lower_bound(params, delta, 0.0, 1.0, 0, 1)
        dfv = df(params, delta, v)
        main_ok = dfv.value + dfv.tail >= bound * (1.0 - 1e-12)
        cls = classify(params, delta, v, 0, 1)
        chain = (
            params.lam**params.p
            * delta ** (params.p + gamma)
            * cls.weighted_important_count(gamma)
        )
        chain_ok = chain >= 1.0 - 1e-12
        disjoint_ok = all(
            len(np.intersect1d(cls.visible[k], cls.important[k])) == 0 for k in cls.visible
        )
        worst_ratio = min(worst_ratio, chain)
        n_ok += main_ok and chain_ok and disjoint_ok
    ok = n_ok == n
    return VerifyCheck(
        "dyadic_walks", ok, f"{n_ok}/{n} walks passed; tightest chain ratio {worst_ratio:.6f}"
    )


def _check_representation() -> VerifyCheck:
    u = StepFunction((1.0,), (0.0, 1.0))
    dom = Domain1D(((0.0, 2.0),))
    params = FunctionalParams(1.0, 1.0, 16.0)
    est = representation_integral(params, u, dom, RepresentationSpec(n_delta=8, n_x=8, depth=12))
    gap = abs(est.value - 1.0)
    ok = gap <= est.error + 0.01
    return VerifyCheck("representation", ok, f"|rep - 1| = {gap:.2e}, error bar {est.error:.2e}")


def _check_mc(seed: int) -> VerifyCheck:
    box = Box((0.0, 0.0), (1.0, 1.0))
    f = FunctionND(2, box, CoordinateRamp(axis=0, slope=1.0))
    params = FunctionalParams(2.0, 2.0, 1e3, dim=2)
    one = f_mc(params, f, 200_000, seed, threads=1)
    two = f_mc(params, f, 200_000, seed, threads=2)
    sl = f_slice_average(params, f, directions=16, offsets=32)
    sigma = math.hypot(one.std_error, sl.error)
    reproducible = one.value == two.value and one.std_error == two.std_error
    close = abs(one.value - sl.value) <= 4.0 * sigma
    detail = (
        f"threads 1 vs 2 {'identical' if reproducible else 'DIFFER'}; "
        f"|mc - slice| = {abs(one.value - sl.value):.2e} vs 4 sigma = {4.0 * sigma:.2e}"
    )
    return VerifyCheck("mc_reproducible", reproducible and close, detail)


def run_verify(seed: int = 0) -> VerifyReport:
    rng = np.random.default_rng(seed)
    checks = (
        _check_constants(),
        _check_step_exact(),
        _check_scaling(rng),
        _check_triangle(rng),
        _check_walks(rng),
        _check_representation(),
        _check_mc(seed),
    )
    return VerifyReport(seed=seed, checks=checks)
