"""HTTP facade over the evaluators, experiment runners, and verifier.

The service is stateless and never touches the filesystem: experiment
reports come back in the response body, and the command-line client decides
what (if anything) to write to disk.  Domain errors (unsupported variants,
violated hypotheses, bad preconditions) map to 400 responses with the
original message; schema violations are FastAPI's usual 422.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .config import (
    DomainCfg,
    Function1DCfg,
    FunctionNDCfg,
    ResolutionCfg,
    ExperimentConfig,
    build_box,
    build_domain_1d,
    build_function_1d,
    build_function_nd,
)
from .experiments import _jsonable, run
from .functional1d import QuadratureSpec, f_best, f_bruteforce, f_exact, f_quadrature
from .model import (
    DomainError,
    FunctionalParams,
    HypothesisError,
    PreconditionError,
    UnsupportedVariantError,
)
from .slicing import c_gamma, c_np, f_mc, f_slice_average, sphere_area
from .verify import run_verify


class _Msg(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HealthResponse(_Msg):
    status: str
    version: str


class ConstantsResponse(_Msg):
    gamma: float
    p: float
    dim: int
    c_np: float
    c_gamma: float
    sphere_area: float
    threshold_exponent: float


class EvalParams(_Msg):
    gamma: float = Field(gt=0)
    p: float = Field(ge=1)
    lam: float = Field(gt=0)
    dim: int = Field(default=1, ge=1)


class EvaluateRequest(_Msg):
    params: EvalParams
    function: Union[Function1DCfg, FunctionNDCfg] = Field(discriminator="variant")
    domain: DomainCfg
    method: Literal["auto", "exact", "quadrature", "bruteforce", "mc", "slice"] = "auto"
    resolution: ResolutionCfg = ResolutionCfg()
    samples: int = Field(default=1_000_000, ge=1000)
    bruteforce_nodes: int = Field(default=256, ge=16)
    seed: int = 0
    threads: int = Field(default=1, ge=1)


class EvaluateResponse(_Msg):
    value: float
    error: Optional[float]
    method: str


class VerifyRequest(_Msg):
    seed: int = 0


class VerifyCheckModel(_Msg):
    name: str
    ok: bool
    detail: str


class VerifyResponse(_Msg):
    passed: bool
    seed: int
    checks: list[VerifyCheckModel]


def _evaluate_1d(req: EvaluateRequest) -> EvaluateResponse:
    params = FunctionalParams(req.params.gamma, req.params.p, req.params.lam)
    f = build_function_1d(req.function)
    dom = build_domain_1d(req.domain)
    spec = QuadratureSpec(
        nodes_per_decade=req.resolution.quad_nodes_per_decade,
        x_nodes=req.resolution.quad_x_nodes,
    )
    if req.method == "auto":
        est = f_best(params, f, dom, spec)
        return EvaluateResponse(value=est.value, error=est.error, method="auto")
    if req.method == "exact":
        return EvaluateResponse(value=f_exact(params, f, dom), error=0.0, method="exact")
    if req.method == "quadrature":
        est = f_quadrature(params, f, dom, spec)
        return EvaluateResponse(value=est.value, error=est.error, method="quadrature")
    if req.method == "bruteforce":
        value = f_bruteforce(params, f, dom, n=req.bruteforce_nodes)
        return EvaluateResponse(value=value, error=None, method="bruteforce")
    raise HTTPException(status_code=400, detail=f"method {req.method!r} needs dim >= 2")


def _evaluate_nd(req: EvaluateRequest) -> EvaluateResponse:
    params = FunctionalParams(
        req.params.gamma, req.params.p, req.params.lam, dim=req.params.dim
    )
    box = build_box(req.domain)
    f = build_function_nd(req.function, box)
    if req.method == "mc":
        est = f_mc(params, f, req.samples, req.seed, threads=req.threads)
        return EvaluateResponse(value=est.value, error=est.std_error, method="mc")
    if req.method in ("auto", "slice"):
        est = f_slice_average(
            params,
            f,
            directions=req.resolution.slice_directions,
            offsets=req.resolution.slice_offsets,
        )
        return EvaluateResponse(value=est.value, error=est.error, method="slice")
    raise HTTPException(status_code=400, detail=f"method {req.method!r} needs dim = 1")


def create_app() -> FastAPI:
    app = FastAPI(title="nlflab", version=__version__)

    def _bad_request(_: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    for exc_type in (DomainError, PreconditionError, HypothesisError, UnsupportedVariantError):
        app.add_exception_handler(exc_type, _bad_request)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/constants", response_model=ConstantsResponse)
    def constants(
        gamma: float = Query(default=1.0, gt=0),
        p: float = Query(default=1.0, ge=1),
        dim: int = Query(default=1, ge=1),
    ) -> ConstantsResponse:
        return ConstantsResponse(
            gamma=gamma,
            p=p,
            dim=dim,
            c_np=c_np(dim, p),
            c_gamma=c_gamma(gamma),
            sphere_area=sphere_area(dim),
            threshold_exponent=1.0 + gamma / p,
        )

    @app.post("/evaluate", response_model=EvaluateResponse)
    def evaluate(req: EvaluateRequest) -> EvaluateResponse:
        if req.params.dim == 1:
            return _evaluate_1d(req)
        return _evaluate_nd(req)

    @app.post("/experiments/run")
    def experiments_run(cfg: ExperimentConfig) -> dict:
        report = run(cfg)
        return _jsonable(report.to_payload())

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        report = run_verify(req.seed)
        return VerifyResponse.model_validate(report.to_payload())

    return app
