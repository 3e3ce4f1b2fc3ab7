"""Experiment runners, reporting, and serialization."""

import json
import math

import numpy as np
import pytest

from nlflab import experiments as ex
from nlflab.config import config_from_dict
from nlflab.model import (
    Domain1D,
    GridSamples,
    LinearRamp,
    PreconditionError,
    StepFunction,
)

LOG2 = math.log(2.0)


def cfg(data: dict):
    return config_from_dict(data)


# ----------------------------------------------------------------------------
# report plumbing


def test_report_row_coercion():
    row = ex.ReportRow(lam=np.float64(2), value=1, error=0, reference=None, bound=np.int64(3), status="pass")
    assert isinstance(row.lam, float) and isinstance(row.value, float)
    assert isinstance(row.bound, float) and row.reference is None


def test_report_ok_and_payload():
    rows = (
        ex.ReportRow(1.0, 1.0, 0.0, None, None, "pass"),
        ex.ReportRow(2.0, None, None, None, None, "skipped"),
    )
    rep = ex.Report(kind="sweep", rows=rows, summary={"note": 1})
    assert rep.ok
    payload = rep.to_payload()
    assert payload["kind"] == "sweep" and payload["ok"] is True
    assert payload["rows"][0]["lambda"] == 1.0 and payload["rows"][1]["pass"] == "skipped"

    bad = ex.Report(kind="sweep", rows=rows + (ex.ReportRow(3.0, 0.0, 0.0, 1.0, 1.0, "fail"),), summary={})
    assert not bad.ok


def test_format_csv_and_json():
    rows = [ex.ReportRow(10.0, 0.5, 0.01, None, 0.25, "pass")]
    text = ex.format_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "lambda,value,error,reference,bound,pass"
    assert lines[1].startswith("10") and lines[1].endswith("pass")
    summary = {"bound": np.float64(0.25), "limit": math.inf, "nested": {"n": np.int64(3)}}
    rep = ex.Report(kind="cell_bound", rows=tuple(rows), summary=summary)
    payload = json.loads(ex.format_json(rep))
    assert payload["summary"]["bound"] == 0.25
    assert payload["summary"]["limit"] == "inf"  # non-finite floats survive as strings
    assert payload["summary"]["nested"]["n"] == 3


def test_write_report_creates_dirs_and_is_deterministic(tmp_path):
    rep = ex.Report(
        kind="sweep",
        rows=(ex.ReportRow(4.0, 1.0, 0.0, 1.0, None, "pass"),),
        summary={"reference_limit": 1.0},
    )
    prefix = tmp_path / "nested" / "deeper" / "out"
    p_csv, p_json = ex.write_report(rep, prefix)
    assert p_csv.exists() and p_json.exists()
    first = p_csv.read_text()
    ex.write_report(rep, prefix)
    assert p_csv.read_text() == first
    leftovers = [p for p in p_csv.parent.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []


# ----------------------------------------------------------------------------
# fitting and references


def test_fit_power_limit_recovers_synthetic_decay():
    lams = np.geomspace(10.0, 1e5, 12)
    values = 3.0 + 5.0 * lams**-1.5
    fit = ex.fit_power_limit(lams, values)
    assert fit["extrapolated_limit"] == pytest.approx(3.0, abs=1e-6)
    assert fit["fit_exponent"] == pytest.approx(1.5, abs=1e-3)
    assert fit["fit_residual"] < 1e-8


def test_fit_power_limit_constant_short_circuit():
    lams = np.geomspace(10.0, 1e4, 6)
    fit = ex.fit_power_limit(lams, np.full(6, 7.25))
    assert fit["extrapolated_limit"] == 7.25
    assert fit["fit_residual"] == 0.0 and fit["fit_exponent"] == 0.0


def test_limit_reference_variants():
    dom01 = Domain1D(((0.0, 1.0),))
    dom02 = Domain1D(((0.0, 2.0),))
    step = StepFunction((1.0,), (0.0, 1.0))

    ramp = ex.limit_reference(1.0, 2.0, LinearRamp(1.0), dom01)
    assert ramp["reference_limit"] == pytest.approx(2.0, rel=1e-12)
    assert not ramp["reference_infinite"]

    st1 = ex.limit_reference(1.0, 1.0, step, dom02)
    assert st1["reference_limit"] == pytest.approx(1.0, rel=1e-12)

    st2 = ex.limit_reference(1.0, 2.0, step, dom02)
    assert st2["reference_limit"] is None and st2["reference_infinite"]

    from nlflab.model import CantorApproximant

    cantor = ex.limit_reference(1.0, 1.0, CantorApproximant(6), dom01)
    assert cantor["reference_limit"] is None
    assert cantor["reference_lower"] == pytest.approx(1.0, rel=1e-9)
    assert cantor["reference_upper"] == pytest.approx(2.0, rel=1e-9)

    grid = GridSamples((0.0, 1.0), (0.0, 1.0, 0.5, 1.5, 0.25))
    unknown = ex.limit_reference(1.0, 1.0, grid, Domain1D(((0.0, 1.0),)))
    assert unknown["reference_limit"] is None and unknown["reference_lower"] is None


# ----------------------------------------------------------------------------
# families


def test_family_member_requires_matching_base():
    base = cfg(
        {
            "kind": "gamma_liminf",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "linear_ramp", "slope": 1.0},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 10.0, "max": 100.0, "count": 3},
            "family": {"kind": "mollified", "width_exponent": 2.0},
        }
    )
    dom = Domain1D(((0.0, 1.0),))
    with pytest.raises(PreconditionError):
        ex.family_member(base, LinearRamp(1.0), dom, 10.0)

    osc = cfg(
        {
            "kind": "gamma_liminf",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [0.5], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 10.0, "max": 100.0, "count": 3},
            "family": {"kind": "oscillation", "amplitude_exponent": 1.0, "frequency_exponent": 0.5},
        }
    )
    with pytest.raises(PreconditionError):
        ex.family_member(osc, StepFunction((0.5,), (0.0, 1.0)), dom, 10.0)


# ----------------------------------------------------------------------------
# runners


def test_run_sweep_ramp_limit():
    c = cfg(
        {
            "kind": "sweep",
            "params": {"gamma": 1.0, "p": 2.0},
            "function": {"variant": "linear_ramp", "slope": 1.0},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 10.0, "max": 1e4, "count": 12},
        }
    )
    res = ex.run_sweep(c)
    assert abs(res.extrapolated_limit - 2.0) <= 0.005 * 2.0
    assert res.report.summary["reference_limit"] == 2.0
    assert res.report.ok
    # no bound is being certified here, so rows carry no status
    assert all(r.status is None for r in res.report.rows)
    assert len(res.rows) == 12 and res.rows[0][0] == 10.0


def test_run_sweep_degenerate_step():
    c = cfg(
        {
            "kind": "sweep",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 2.0]]},
            "lambda_grid": {"min": 16.0, "max": 1024.0, "count": 5},
        }
    )
    res = ex.run_sweep(c)
    assert res.extrapolated_limit == res.rows[-1][1]
    assert res.fit_residual == 0.0
    assert abs(res.extrapolated_limit - 1.0) <= 1e-12
    assert res.report.summary["reference_limit"] == 1.0


def test_run_sweep_cantor_bracket():
    c = cfg(
        {
            "kind": "sweep",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "cantor", "level": 6},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 1e5, "max": 1e8, "count": 6},
        }
    )
    res = ex.run_sweep(c)
    s = res.report.summary
    assert s["reference_limit"] is None
    assert abs(s["reference_lower"] - 1.0) < 1e-12
    assert abs(s["reference_upper"] - 2.0) < 1e-12
    assert res.report.ok
    assert all(r.status == "pass" for r in res.report.rows)


def test_run_dyadic_check_passes_and_skips():
    c = cfg(
        {
            "kind": "dyadic_check",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 2.0]]},
            "lambda_grid": {"min": 16.0, "max": 64.0, "count": 2},
            "resolution": {"rep_n_delta": 8, "rep_n_x": 8, "rep_depth": 12},
        }
    )
    rep = ex.run_dyadic_check(c)
    assert rep.ok and all(r.status == "pass" for r in rep.rows)

    # lambda below the oscillation hypothesis: row is skipped, not failed
    low = cfg(
        {
            "kind": "dyadic_check",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 2.0]]},
            "lambda_grid": {"min": 0.5, "max": 0.5, "count": 1},
            "resolution": {"rep_n_delta": 4, "rep_n_x": 4, "rep_depth": 8},
        }
    )
    rep = ex.run_dyadic_check(low)
    assert rep.ok
    assert rep.rows[0].status == "skipped" and rep.rows[0].value is None


def test_run_cell_bound_step():
    c = cfg(
        {
            "kind": "cell_bound",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.5], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 3.0]]},
            "lambda_grid": {"min": 2.0, "max": 128.0, "count": 7},
            "cell": {"k": 0, "epsilon": 0.01},
        }
    )
    rep = ex.run_cell_bound(c)
    assert abs(rep.rows[0].bound - 0.99 * 2.0 * (LOG2 / 3.0)) < 1e-12
    assert rep.summary["lambda_threshold"] == pytest.approx(4.0)
    assert rep.summary["density_ok"] is True
    assert rep.rows[0].status == "skipped"  # lam = 2 is below the threshold
    assert all(r.status == "pass" for r in rep.rows if r.lam >= 4.0)


def test_run_cell_bound_ramp_density_diagnostic():
    c = cfg(
        {
            "kind": "cell_bound",
            "params": {"gamma": 1.0, "p": 2.0},
            "function": {"variant": "linear_ramp", "slope": 1.0},
            "domain": {"intervals": [[0.0, 1.0]]},
            "lambda_grid": {"min": 1e3, "max": 1e3, "count": 1},
            "cell": {"k": 2, "epsilon": 0.01},
        }
    )
    rep = ex.run_cell_bound(c)
    row = rep.rows[0]
    # a ramp spreads its variation, so the plateau-density diagnostic fails
    # while the inequality itself still holds
    assert rep.summary["density_ok"] is False
    assert row.status == "pass"
    assert abs(row.value - 2.0) < 0.05


def test_run_cell_bound_constant_function():
    c = cfg(
        {
            "kind": "cell_bound",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.5, 0.5]},
            "domain": {"intervals": [[0.0, 3.0]]},
            "lambda_grid": {"min": 4.0, "max": 4.0, "count": 1},
            "cell": {"k": 0, "epsilon": 0.01},
        }
    )
    rep = ex.run_cell_bound(c)
    assert rep.rows[0].status == "pass" and rep.rows[0].bound == 0.0


@pytest.mark.parametrize(
    "family,function,p,expect_infinite",
    [
        ({"kind": "identity"}, {"variant": "linear_ramp", "slope": 1.0}, 1.0, False),
        (
            {"kind": "mollified", "width_exponent": 2.0},
            {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            1.0,
            False,
        ),
        (
            {"kind": "mollified", "width_exponent": 2.0},
            {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            2.0,
            True,
        ),
        (
            {"kind": "oscillation", "amplitude_exponent": 1.0, "frequency_exponent": 0.5},
            {"variant": "linear_ramp", "slope": 1.0},
            2.0,
            False,
        ),
    ],
)
def test_run_gamma_liminf_families(family, function, p, expect_infinite):
    dom = [[0.0, 1.0]] if function["variant"] == "linear_ramp" else [[0.0, 2.0]]
    c = cfg(
        {
            "kind": "gamma_liminf",
            "params": {"gamma": 1.0, "p": p},
            "function": function,
            "domain": {"intervals": dom},
            "lambda_grid": {"min": 10.0, "max": 1e3, "count": 6},
            "family": family,
        }
    )
    rep = ex.run_gamma_liminf(c)
    assert rep.ok
    assert rep.summary["bound_infinite"] is expect_infinite
    if family["kind"] == "identity":
        assert abs(rep.summary["bound"] - 2.0 * LOG2 / 3.0) < 1e-12


def test_run_gamma_liminf_constant_base():
    c = cfg(
        {
            "kind": "gamma_liminf",
            "params": {"gamma": 1.0, "p": 2.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.5, 0.5]},
            "domain": {"intervals": [[0.0, 2.0]]},
            "lambda_grid": {"min": 10.0, "max": 1e3, "count": 4},
            "family": {"kind": "identity"},
        }
    )
    rep = ex.run_gamma_liminf(c)
    assert rep.ok and rep.summary["bound"] == 0.0


def search_cfg(n_plateaus: int, *, p: float = 1.0, seed: int | None = None, budget: int | None = None):
    search: dict = {"n_plateaus": n_plateaus}
    if n_plateaus > 0:
        search["restarts"] = 2
    if budget is not None:
        search["budget"] = budget
    data = {
        "kind": "family_search",
        "params": {"gamma": 1.0, "p": p},
        "domain": {"intervals": [[0.0, 1.0]]},
        "lambda_grid": {"min": 1e3, "max": 1e3, "count": 1},
        "search": search,
    }
    if seed is not None:
        data["seed"] = seed
    return cfg(data)


def test_run_family_search_single_jump():
    rep = ex.run_family_search(search_cfg(0))
    assert rep.rows[0].status == "pass"
    assert abs(rep.summary["best_value"] - 1.0) < 1e-9


def test_run_family_search_bracket_and_budget():
    rep = ex.run_family_search(search_cfg(1, seed=7))
    assert rep.ok
    lower, upper = rep.summary["bracket_lower"], rep.summary["bracket_upper"]
    assert lower - 1e-9 <= rep.summary["best_value"] <= upper * 1.05

    b100 = ex.run_family_search(search_cfg(1, seed=7, budget=100)).summary["best_value"]
    b200 = ex.run_family_search(search_cfg(1, seed=7, budget=200)).summary["best_value"]
    assert b200 <= b100 + 1e-12


def test_run_family_search_p2_prefers_split_jumps():
    best_split = ex.run_family_search(search_cfg(1, p=2.0, seed=3)).summary["best_value"]
    best_single = ex.run_family_search(search_cfg(0, p=2.0)).summary["best_value"]
    assert best_split < best_single


def test_run_slicing_check_and_serialization(tmp_path):
    c = cfg(
        {
            "kind": "slicing_check",
            "params": {"gamma": 2.0, "p": 2.0, "dim": 2},
            "function": {"variant": "coordinate_ramp", "axis": 0, "slope": 1.0},
            "domain": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]},
            "lambda_grid": {"min": 1e3, "max": 1e3, "count": 1},
            "monte_carlo": {"samples": 200000},
            "resolution": {"slice_directions": 16, "slice_offsets": 32},
            "seed": 11,
        }
    )
    rep = ex.run_slicing_check(c)
    assert rep.ok and rep.rows[0].status == "pass"

    prefix = tmp_path / "out" / "exp"
    p_csv, p_json = ex.write_report(rep, prefix)
    text1 = p_csv.read_text()
    ex.write_report(rep, prefix)
    assert p_csv.read_text() == text1
    assert text1.splitlines()[0] == "lambda,value,error,reference,bound,pass"
    payload = json.loads(p_json.read_text())
    assert payload["kind"] == "slicing_check" and payload["ok"] is True


def test_run_dispatcher_covers_kind():
    c = cfg(
        {
            "kind": "sweep",
            "params": {"gamma": 1.0, "p": 1.0},
            "function": {"variant": "step", "breakpoints": [1.0], "values": [0.0, 1.0]},
            "domain": {"intervals": [[0.0, 2.0]]},
            "lambda_grid": {"min": 16.0, "max": 1024.0, "count": 3},
        }
    )
    assert ex.run(c).kind == "sweep"
