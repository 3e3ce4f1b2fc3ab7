"""Numerical laboratory for threshold-exceedance nonlocal energies."""

from .model import (
    BVDecomposition,
    CantorApproximant,
    Domain1D,
    DomainError,
    Function1D,
    FunctionalParams,
    GridSamples,
    HypothesisError,
    Indicator,
    LinearRamp,
    PiecewiseLinear,
    PreconditionError,
    StepFunction,
    UnsupportedVariantError,
    bv_decompose,
    evaluate,
    fp_from_points,
    local_energy,
)
from .kernel import BandRegion, exceedance_radius, nu_band, psi
from .functional1d import (
    Estimate,
    QuadratureSpec,
    f_best,
    f_bruteforce,
    f_exact,
    f_exact_ramp,
    f_exact_step,
    f_quadrature,
)
from .dyadic import (
    DFValue,
    DyadicSample,
    IntervalClassification,
    RepresentationSpec,
    SliceWindow,
    classify,
    df,
    dyadic_index_range,
    dyadic_index_set,
    oscillation_lower_bound,
    random_pinned_walk,
    representation_integral,
)
from .slicing import (
    Ball,
    Box,
    CoordinateRamp,
    FunctionND,
    IndicatorConvex,
    MCEstimate,
    TensorOf,
    c_gamma,
    c_np,
    f_mc,
    f_slice_average,
    fp_slice_average,
    sphere_area,
)
from .config import ExperimentConfig, config_from_dict, load_config
from .experiments import (
    Report,
    ReportRow,
    SweepResult,
    fit_power_limit,
    limit_reference,
    run,
    run_cell_bound,
    run_dyadic_check,
    run_family_search,
    run_gamma_liminf,
    run_slicing_check,
    run_sweep,
    write_report,
)
from .verify import VerifyReport, run_verify

__all__ = [
    "BVDecomposition",
    "Ball",
    "BandRegion",
    "Box",
    "CantorApproximant",
    "CoordinateRamp",
    "DFValue",
    "Domain1D",
    "DomainError",
    "DyadicSample",
    "Estimate",
    "ExperimentConfig",
    "Function1D",
    "FunctionND",
    "FunctionalParams",
    "GridSamples",
    "HypothesisError",
    "Indicator",
    "IndicatorConvex",
    "IntervalClassification",
    "LinearRamp",
    "MCEstimate",
    "PiecewiseLinear",
    "PreconditionError",
    "QuadratureSpec",
    "Report",
    "ReportRow",
    "RepresentationSpec",
    "SliceWindow",
    "StepFunction",
    "SweepResult",
    "TensorOf",
    "UnsupportedVariantError",
    "VerifyReport",
    "bv_decompose",
    "c_gamma",
    "c_np",
    "classify",
    "config_from_dict",
    "df",
    "dyadic_index_range",
    "dyadic_index_set",
    "evaluate",
    "exceedance_radius",
    "f_best",
    "f_bruteforce",
    "f_exact",
    "f_exact_ramp",
    "f_exact_step",
    "f_mc",
    "f_quadrature",
    "f_slice_average",
    "fit_power_limit",
    "fp_from_points",
    "fp_slice_average",
    "limit_reference",
    "load_config",
    "local_energy",
    "nu_band",
    "oscillation_lower_bound",
    "psi",
    "random_pinned_walk",
    "representation_integral",
    "run",
    "run_cell_bound",
    "run_dyadic_check",
    "run_family_search",
    "run_gamma_liminf",
    "run_slicing_check",
    "run_sweep",
    "run_verify",
    "sphere_area",
    "write_report",
]

__version__ = "0.1.0"
