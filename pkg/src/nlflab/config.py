"""Experiment configuration: schema, TOML loading, and object construction.

Configs are nested tables (TOML on disk, plain dicts over the service API).
Unknown keys are rejected everywhere, so typos fail loudly instead of being
silently ignored.  The same models double as the request schema of the
service layer.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional, Union

import tomli
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import model as m
from . import slicing as sl


class _Cfg(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParamsCfg(_Cfg):
    gamma: float = Field(gt=0)
    p: float = Field(ge=1)
    dim: int = Field(default=1, ge=1)


class LambdaGridCfg(_Cfg):
    """Geometric grid of lambda values from min to max inclusive."""

    min: float = Field(gt=0)
    max: float = Field(gt=0)
    count: int = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "LambdaGridCfg":
        if self.max < self.min:
            raise ValueError("lambda_grid.max must be >= lambda_grid.min")
        return self

    def values(self) -> list[float]:
        if self.max == self.min:
            return [self.min] * self.count
        if self.count == 1:
            return [self.min]
        ratio = (self.max / self.min) ** (1.0 / (self.count - 1))
        return [self.min * ratio**i for i in range(self.count)]


# -- function specs (1-D) ----------------------------------------------------


class LinearRampCfg(_Cfg):
    variant: Literal["linear_ramp"]
    slope: float


class StepCfg(_Cfg):
    variant: Literal["step"]
    breakpoints: list[float]
    values: list[float]


class IndicatorCfg(_Cfg):
    variant: Literal["indicator"]
    interval: tuple[float, float]


class PiecewiseLinearCfg(_Cfg):
    variant: Literal["piecewise_linear"]
    knots: list[float]
    values: list[float]


class CantorCfg(_Cfg):
    variant: Literal["cantor"]
    level: int = Field(ge=0)


Function1DCfg = Union[LinearRampCfg, StepCfg, IndicatorCfg, PiecewiseLinearCfg, CantorCfg]


# -- function specs (N-D) ----------------------------------------------------


class CoordinateRampCfg(_Cfg):
    variant: Literal["coordinate_ramp"]
    axis: int = Field(ge=0)
    slope: float


class BallIndicatorCfg(_Cfg):
    variant: Literal["ball_indicator"]
    center: list[float]
    radius: float = Field(gt=0)


class BoxIndicatorCfg(_Cfg):
    variant: Literal["box_indicator"]
    lo: list[float]
    hi: list[float]


class TensorCfg(_Cfg):
    variant: Literal["tensor"]
    axis: int = Field(ge=0)
    factor: Function1DCfg = Field(discriminator="variant")


FunctionNDCfg = Union[CoordinateRampCfg, BallIndicatorCfg, BoxIndicatorCfg, TensorCfg]
FunctionCfg = Union[Function1DCfg, FunctionNDCfg]


class DomainCfg(_Cfg):
    """1-D: list of open intervals.  N-D: an axis-aligned box via lo/hi."""

    intervals: Optional[list[tuple[float, float]]] = None
    lo: Optional[list[float]] = None
    hi: Optional[list[float]] = None

    @model_validator(mode="after")
    def _one_shape(self) -> "DomainCfg":
        has_box = self.lo is not None or self.hi is not None
        if self.intervals is not None and has_box:
            raise ValueError("domain takes either intervals or lo/hi, not both")
        if has_box and (self.lo is None or self.hi is None):
            raise ValueError("a box domain needs both lo and hi")
        if self.intervals is None and not has_box:
            raise ValueError("domain needs intervals (1-D) or lo/hi (N-D)")
        return self


# -- kind-specific sections --------------------------------------------------


class ResolutionCfg(_Cfg):
    """Evaluator knobs; defaults match the library defaults."""

    quad_nodes_per_decade: int = Field(default=64, ge=8)
    quad_x_nodes: int = Field(default=256, ge=16)
    rep_n_delta: int = Field(default=32, ge=2)
    rep_n_x: int = Field(default=32, ge=2)
    rep_depth: Optional[int] = Field(default=None, ge=1)
    rep_tail_tol: float = Field(default=1e-3, gt=0)
    slice_directions: int = Field(default=32, ge=8)
    slice_offsets: int = Field(default=64, ge=2)


class CellCfg(_Cfg):
    k: int = Field(ge=0)
    epsilon: float = Field(gt=0, lt=1)


class FamilyCfg(_Cfg):
    """Generator of the approximating family u_lambda for liminf runs."""

    kind: Literal["identity", "mollified", "oscillation"]
    width_exponent: float = Field(default=2.0)
    amplitude_exponent: float = Field(default=1.0)
    frequency_exponent: float = Field(default=0.5)

    @model_validator(mode="after")
    def _converging(self) -> "FamilyCfg":
        if self.kind == "mollified" and not self.width_exponent > 0:
            raise ValueError("mollified family needs width_exponent > 0 (widths must vanish)")
        if self.kind == "oscillation" and not self.amplitude_exponent > 0:
            raise ValueError(
                "oscillation family needs amplitude_exponent > 0 (amplitudes must vanish)"
            )
        return self


class SearchCfg(_Cfg):
    n_plateaus: int = Field(ge=0)
    a_value: float = 0.0
    b_value: float = 1.0
    restarts: int = Field(default=3, ge=1)
    budget: Optional[int] = Field(default=None, ge=10)

    @model_validator(mode="after")
    def _ordered(self) -> "SearchCfg":
        if not self.b_value > self.a_value:
            raise ValueError("search needs b_value > a_value")
        return self


class MonteCarloCfg(_Cfg):
    samples: int = Field(default=1_000_000, ge=1000)


KINDS = ("sweep", "dyadic_check", "cell_bound", "gamma_liminf", "family_search", "slicing_check")


class ExperimentConfig(_Cfg):
    kind: Literal[
        "sweep", "dyadic_check", "cell_bound", "gamma_liminf", "family_search", "slicing_check"
    ]
    params: ParamsCfg
    domain: DomainCfg
    function: Optional[FunctionCfg] = Field(default=None, discriminator="variant")
    lambda_grid: Optional[LambdaGridCfg] = None
    resolution: ResolutionCfg = ResolutionCfg()
    cell: Optional[CellCfg] = None
    family: Optional[FamilyCfg] = None
    search: Optional[SearchCfg] = None
    monte_carlo: MonteCarloCfg = MonteCarloCfg()
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    out: Optional[str] = None

    @model_validator(mode="after")
    def _kind_requirements(self) -> "ExperimentConfig":
        k = self.kind
        if k != "family_search" and self.function is None:
            raise ValueError(f"{k} needs a [function] section")
        if self.lambda_grid is None:
            raise ValueError(f"{k} needs a [lambda_grid] section")
        if k != "slicing_check" and self.params.dim != 1:
            raise ValueError(f"{k} runs on dim = 1")
        if k == "sweep" and self.lambda_grid.count < 3:
            raise ValueError("sweep needs lambda_grid.count >= 3")
        if k == "cell_bound" and self.cell is None:
            raise ValueError("cell_bound needs a [cell] section")
        if k == "gamma_liminf" and self.family is None:
            raise ValueError("gamma_liminf needs a [family] section")
        if k == "family_search" and self.search is None:
            raise ValueError("family_search needs a [search] section")
        if k == "slicing_check" and self.params.dim != 2:
            raise ValueError("slicing_check needs params.dim = 2")
        if self.params.dim == 1 and self.domain.intervals is None:
            raise ValueError("dim = 1 needs domain.intervals")
        if self.params.dim >= 2 and self.domain.lo is None:
            raise ValueError("dim >= 2 needs a box domain (lo/hi)")
        return self


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        data = tomli.load(fh)
    return ExperimentConfig.model_validate(data)


def config_from_dict(data: dict) -> ExperimentConfig:
    return ExperimentConfig.model_validate(data)


# -- builders ----------------------------------------------------------------


def build_function_1d(cfg: Function1DCfg) -> m.Function1D:
    if isinstance(cfg, LinearRampCfg):
        return m.LinearRamp(cfg.slope)
    if isinstance(cfg, StepCfg):
        return m.StepFunction(tuple(cfg.breakpoints), tuple(cfg.values))
    if isinstance(cfg, IndicatorCfg):
        return m.Indicator(cfg.interval)
    if isinstance(cfg, PiecewiseLinearCfg):
        return m.PiecewiseLinear(tuple(cfg.knots), tuple(cfg.values))
    if isinstance(cfg, CantorCfg):
        return m.CantorApproximant(cfg.level)
    raise m.UnsupportedVariantError(f"not a 1-D function spec: {cfg!r}")


def build_domain_1d(cfg: DomainCfg) -> m.Domain1D:
    if cfg.intervals is None:
        raise m.PreconditionError("1-D domain needs intervals")
    return m.Domain1D(tuple((a, b) for a, b in cfg.intervals))


def build_box(cfg: DomainCfg) -> sl.Box:
    if cfg.lo is None or cfg.hi is None:
        raise m.PreconditionError("N-D domain needs lo/hi")
    return sl.Box(tuple(cfg.lo), tuple(cfg.hi))


def build_function_nd(cfg: FunctionNDCfg, box: sl.Box) -> sl.FunctionND:
    if isinstance(cfg, CoordinateRampCfg):
        variant = sl.CoordinateRamp(axis=cfg.axis, slope=cfg.slope)
    elif isinstance(cfg, BallIndicatorCfg):
        variant = sl.IndicatorConvex(sl.Ball(tuple(cfg.center), cfg.radius))
    elif isinstance(cfg, BoxIndicatorCfg):
        variant = sl.IndicatorConvex(sl.Box(tuple(cfg.lo), tuple(cfg.hi)))
    elif isinstance(cfg, TensorCfg):
        variant = sl.TensorOf(build_function_1d(cfg.factor), cfg.axis)
    else:
        raise m.UnsupportedVariantError(f"not an N-D function spec: {cfg!r}")
    return sl.FunctionND(box.dim, box, variant)
