"""Threshold kernel and closed-form band measures."""

import math

import numpy as np
import pytest

from nlflab.kernel import BandRegion, exceedance_radius, nu_band, psi
from nlflab.model import FunctionalParams

from oracles import band_measure_oracle


def test_psi_strict_inequality():
    params = FunctionalParams(gamma=1.0, p=1.0, lam=2.0)
    # threshold at separation 0.5 is 2 * 0.5^2 = 0.5
    assert not psi(params, 0.5, 0.5)  # equality does not count
    assert psi(params, 0.5, 0.5 + 1e-12)
    assert not psi(params, 0.5, 0.4)


def test_psi_broadcast():
    params = FunctionalParams(gamma=1.0, p=2.0, lam=1.0)
    seps = np.array([0.25, 1.0, 4.0])
    hits = psi(params, seps, 1.0)  # threshold = sep^1.5
    np.testing.assert_array_equal(hits, [True, False, False])


def test_exceedance_radius():
    params = FunctionalParams(gamma=1.0, p=1.0, lam=4.0)
    r = exceedance_radius(params, 1.0)
    assert r == pytest.approx(0.5)  # (1/4)^(1/2)
    assert exceedance_radius(params, 0.0) == 0.0
    assert exceedance_radius(params, -1.0) == 0.0
    # consistency: just inside the radius exceeds, just outside does not
    assert psi(params, r * (1 - 1e-9), 1.0)
    assert not psi(params, r * (1 + 1e-9), 1.0)


def test_band_region_validation():
    with pytest.raises(ValueError):
        BandRegion((1.0, 0.0), (0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        BandRegion((0.0, 1.0), (0.0, 1.0), -0.5)
    with pytest.raises(ValueError):
        BandRegion((0.0, 1.0), (0.0, 1.0), math.inf)


def test_nu_band_gamma1_is_area():
    # gamma = 1 makes the kernel constant 1, so the measure is plain area
    full = nu_band(1.0, BandRegion((0.0, 1.0), (0.0, 1.0), 1.0))
    assert full == pytest.approx(1.0, abs=1e-14)
    half = nu_band(1.0, BandRegion((0.0, 1.0), (0.0, 1.0), 0.5))
    assert half == pytest.approx(1.0 - 0.25, abs=1e-14)  # 1 - (1 - r)^2


def test_nu_band_gamma2_unit_square():
    # integral of |y - x| over the unit square is 1/3
    val = nu_band(2.0, BandRegion((0.0, 1.0), (0.0, 1.0), 1.0))
    assert val == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_nu_band_degenerate_cases():
    assert nu_band(1.0, BandRegion((0.0, 1.0), (0.0, 1.0), 0.0)) == 0.0
    # rectangles too far apart for the radius
    assert nu_band(1.0, BandRegion((0.0, 1.0), (2.0, 3.0), 1.0)) == 0.0
    with pytest.raises(ValueError):
        nu_band(0.0, BandRegion((0.0, 1.0), (0.0, 1.0), 1.0))


def test_nu_band_adjacent_triangle():
    # adjacent intervals with r <= length: measure r^(gamma+1)/(gamma+1)
    for gamma, r in [(1.0, 0.5), (0.5, 0.8), (2.0, 1.0)]:
        val = nu_band(gamma, BandRegion((0.0, 1.0), (1.0, 2.0), r))
        assert val == pytest.approx(r ** (gamma + 1.0) / (gamma + 1.0), rel=1e-13)


def test_nu_band_symmetry_and_invariance():
    rng = np.random.default_rng(5)
    for _ in range(10):
        gamma = float(rng.uniform(0.3, 3.0))
        x = tuple(sorted(rng.uniform(-2, 2, 2)))
        y = tuple(sorted(rng.uniform(-2, 2, 2)))
        r = float(rng.uniform(0.1, 2.0))
        if x[1] <= x[0] or y[1] <= y[0]:
            continue
        a = nu_band(gamma, BandRegion(x, y, r))
        # swap x and y
        assert nu_band(gamma, BandRegion(y, x, r)) == pytest.approx(a, rel=1e-12, abs=1e-15)
        # translate both
        c = 0.731
        shifted = nu_band(gamma, BandRegion((x[0] + c, x[1] + c), (y[0] + c, y[1] + c), r))
        assert shifted == pytest.approx(a, rel=1e-10, abs=1e-15)
        # scale: measure homogeneous of degree gamma + 1
        s = 1.75
        scaled = nu_band(gamma, BandRegion((s * x[0], s * x[1]), (s * y[0], s * y[1]), s * r))
        assert scaled == pytest.approx(s ** (gamma + 1.0) * a, rel=1e-10, abs=1e-15)


def test_nu_band_monotone_in_radius():
    region = lambda r: BandRegion((0.0, 1.0), (0.5, 2.0), r)
    vals = [nu_band(1.3, region(r)) for r in (0.1, 0.5, 1.0, 2.0, 5.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_nu_band_against_oracle():
    # semi-analytic cross-check on random rectangles across the gamma range
    rng = np.random.default_rng(42)
    for _ in range(12):
        gamma = float(rng.choice([0.5, 1.0, 1.7, 2.0, 3.0]))
        x0 = float(rng.uniform(-2, 1))
        x1 = x0 + float(rng.uniform(0.2, 2.0))
        y0 = float(rng.uniform(-2, 1))
        y1 = y0 + float(rng.uniform(0.2, 2.0))
        r = float(rng.uniform(0.05, 3.0))
        a = nu_band(gamma, BandRegion((x0, x1), (y0, y1), r))
        b = band_measure_oracle(gamma, (x0, x1), (y0, y1), r)
        assert a == pytest.approx(b, rel=1e-5, abs=1e-9)
