"""Config schema: TOML loading, validation, and object construction."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from nlflab import model as m
from nlflab import slicing as sl
from nlflab.config import (
    ExperimentConfig,
    FamilyCfg,
    LambdaGridCfg,
    SearchCfg,
    build_box,
    build_domain_1d,
    build_function_1d,
    build_function_nd,
    config_from_dict,
    load_config,
)

CONFIGS_DIR = Path(__file__).resolve().parents[1] / "configs"


def minimal_sweep(**overrides) -> dict:
    data = {
        "kind": "sweep",
        "params": {"gamma": 1.0, "p": 1.0},
        "function": {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
        "domain": {"intervals": [[0.0, 2.0]]},
        "lambda_grid": {"min": 10.0, "max": 100.0, "count": 3},
    }
    data.update(overrides)
    return data


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(
        """
kind = "sweep"
seed = 5
threads = 2

[params]
gamma = 1.0
p = 2.0

[function]
variant = "linear_ramp"
slope = 1.0

[domain]
intervals = [[0.0, 1.0]]

[lambda_grid]
min = 10.0
max = 1000.0
count = 4
"""
    )
    cfg = load_config(path)
    assert cfg.kind == "sweep"
    assert cfg.seed == 5 and cfg.threads == 2
    assert cfg.params.gamma == 1.0 and cfg.params.p == 2.0
    assert cfg.function.variant == "linear_ramp"
    assert cfg.domain.intervals == [(0.0, 1.0)]
    # defaults fill in
    assert cfg.resolution.quad_nodes_per_decade == 64
    assert cfg.monte_carlo.samples == 1_000_000
    assert cfg.out is None


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(bogus_key=1))
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(params={"gamma": 1.0, "p": 1.0, "typo": 2}))
    with pytest.raises(ValidationError):
        config_from_dict(
            minimal_sweep(function={"variant": "step", "breakpoints": [1.0], "values": [0, 1], "x": 3})
        )


def test_kind_requirements():
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(function=None))  # sweep needs a function
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(lambda_grid=None))
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(lambda_grid={"min": 10.0, "max": 100.0, "count": 2}))
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(kind="cell_bound"))  # missing [cell]
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(kind="gamma_liminf"))  # missing [family]
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(kind="family_search"))  # missing [search]
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(params={"gamma": 1.0, "p": 1.0, "dim": 2}))  # sweep is 1-D
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(domain={"lo": [0.0, 0.0], "hi": [1.0, 1.0]}))
    # family_search may omit the function section
    cfg = config_from_dict(
        {
            "kind": "family_search",
            "params": {"gamma": 1.0, "p": 1.0},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 100.0, "max": 100.0, "count": 1},
            "search": {"n_plateaus": 1},
        }
    )
    assert cfg.function is None
    # slicing_check requires dim = 2 and a box domain
    with pytest.raises(ValidationError):
        config_from_dict(
            {
                "kind": "slicing_check",
                "params": {"gamma": 2.0, "p": 2.0, "dim": 2},
                "function": {"variant": "coordinate_ramp", "axis": 0, "slope": 1.0},
                "domain": {"intervals": [[0.0, 1.0]]},
                "lambda_grid": {"min": 10.0, "max": 10.0, "count": 1},
            }
        )


def test_domain_cfg_shape_rules():
    with pytest.raises(ValidationError):
        config_from_dict(
            minimal_sweep(domain={"intervals": [[0.0, 2.0]], "lo": [0.0], "hi": [1.0]})
        )
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(domain={"lo": [0.0, 0.0]}))  # hi missing
    with pytest.raises(ValidationError):
        config_from_dict(minimal_sweep(domain={}))


def test_lambda_grid_values():
    grid = LambdaGridCfg(min=10.0, max=1000.0, count=3)
    assert grid.values() == pytest.approx([10.0, 100.0, 1000.0])
    assert LambdaGridCfg(min=5.0, max=5.0, count=3).values() == [5.0, 5.0, 5.0]
    assert LambdaGridCfg(min=5.0, max=500.0, count=1).values() == [5.0]
    with pytest.raises(ValidationError):
        LambdaGridCfg(min=10.0, max=1.0, count=3)


def test_family_cfg_must_converge():
    with pytest.raises(ValidationError):
        FamilyCfg(kind="mollified", width_exponent=-1.0)
    with pytest.raises(ValidationError):
        FamilyCfg(kind="oscillation", amplitude_exponent=0.0)
    assert FamilyCfg(kind="identity").kind == "identity"


def test_search_cfg_ordering():
    with pytest.raises(ValidationError):
        SearchCfg(n_plateaus=1, a_value=1.0, b_value=0.0)


def test_build_function_1d_all_variants():
    cases = {
        "linear_ramp": ({"variant": "linear_ramp", "slope": 2.0}, m.LinearRamp),
        "step": ({"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]}, m.StepFunction),
        "indicator": ({"variant": "indicator", "interval": [0.0, 1.0]}, m.Indicator),
        "piecewise_linear": (
            {"variant": "piecewise_linear", "knots": [0.0, 1.0], "values": [0.0, 1.0]},
            m.PiecewiseLinear,
        ),
        "cantor": ({"variant": "cantor", "level": 3}, m.CantorApproximant),
    }
    for _, (spec, expected_type) in cases.items():
        cfg = config_from_dict(minimal_sweep(function=spec))
        assert isinstance(build_function_1d(cfg.function), expected_type)


def test_build_function_nd_all_variants():
    box = sl.Box((0.0, 0.0), (1.0, 1.0))
    base = {
        "kind": "slicing_check",
        "params": {"gamma": 2.0, "p": 1.0, "dim": 2},
        "domain": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]},
        "lambda_grid": {"min": 10.0, "max": 10.0, "count": 1},
    }
    specs = [
        ({"variant": "coordinate_ramp", "axis": 0, "slope": 1.0}, sl.CoordinateRamp),
        ({"variant": "ball_indicator", "center": [0.5, 0.5], "radius": 0.25}, sl.IndicatorConvex),
        (
            {"variant": "box_indicator", "lo": [0.25, 0.25], "hi": [0.75, 0.75]},
            sl.IndicatorConvex,
        ),
        (
            {
                "variant": "tensor",
                "axis": 1,
                "factor": {"variant": "step", "breakpoints": [0.5], "values": [0.0, 1.0]},
            },
            sl.TensorOf,
        ),
    ]
    for spec, expected_type in specs:
        cfg = config_from_dict({**base, "function": spec})
        f = build_function_nd(cfg.function, box)
        assert isinstance(f.variant, expected_type)
        assert f.dim == 2


def test_build_domain_helpers():
    cfg = config_from_dict(minimal_sweep())
    dom = build_domain_1d(cfg.domain)
    assert dom.intervals == ((0.0, 2.0),)
    with pytest.raises(m.PreconditionError):
        build_box(cfg.domain)


def test_shipped_configs_parse():
    paths = sorted(CONFIGS_DIR.glob("*.toml"))
    assert len(paths) >= 6
    kinds = set()
    for path in paths:
        cfg = load_config(path)
        kinds.add(cfg.kind)
    # the samples exercise every experiment kind
    assert kinds == {
        "sweep",
        "dyadic_check",
        "cell_bound",
        "gamma_liminf",
        "family_search",
        "slicing_check",
    }
