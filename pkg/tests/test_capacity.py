import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from orbitcap import billiard, capacity


def test_units():
    assert capacity.l_unit("cp", 2) == pytest.approx(oracles.PRIME_LENGTH, abs=1e-10)
    assert capacity.l_unit("RP", 1) == pytest.approx(oracles.PRIME_LENGTH_RP, abs=1e-10)
    with pytest.raises(ValueError):
        capacity.l_unit("HP")


@given(st.floats(-20, 20, allow_nan=False))
def test_upper_bound_formula(s):
    up = capacity.upper_bound("CP", s)
    assert up == np.hypot(s, 1.0) - abs(s)
    assert 0 < up <= 1.0


def test_upper_bound_rp():
    assert capacity.upper_bound("RP") == 2.0
    with pytest.raises(ValueError):
        capacity.upper_bound("RP", 0.5)


@given(st.floats(0.5, 10.0), st.floats(0.001, 0.2))
def test_profile_shape(osc, frac):
    eps = frac * osc
    prof = capacity.make_profile(osc, eps, grid_points=2001)
    fp = prof.fprime(prof.grid)
    assert np.all(fp >= 0) and np.max(fp) <= prof.slope_cap + 1e-15
    assert prof.slope_cap < 1.0
    assert prof.fprime(0.5 * prof.a) == 0.0 and prof.fprime(prof.osc - 0.5 * prof.plateau_high) == 0.0
    assert prof.f(prof.osc) - prof.f(0.0) == pytest.approx(osc - eps, rel=1e-12)


def test_profile_antiderivative_matches_quadrature():
    prof = capacity.make_profile(2.0, 0.1, grid_points=200_001)
    h = prof.grid
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (prof.fprime(h[1:]) + prof.fprime(h[:-1])) * np.diff(h))])
    assert np.max(np.abs(cum - prof.f(h))) < 1e-9


def test_profile_errors():
    with pytest.raises(ValueError):
        capacity.make_profile(1.0, 1.5)
    with pytest.raises(ValueError):
        capacity.make_profile(-1.0, 0.1)


def test_certification_catches_steep_profile():
    prof = capacity.make_profile(2.0, 0.1)
    steep = capacity.AdmissibleProfile(prof.osc, prof.eps, 1.01, prof.plateau_low, prof.plateau_high, prof.ramp, prof.grid)
    with pytest.raises(capacity.CertificationError):
        capacity.certify_admissible(steep, "CP")


def test_certification_spot_checks():
    l = capacity.l_unit("CP")
    prof = capacity.make_profile(l, 0.05 * l)
    cert = capacity.certify_admissible(prof, "CP", spot_levels=2)
    assert cert.ok and cert.min_analytic_period > 1
    assert len(cert.spot_checks) == 2
    for c in cert.spot_checks:
        assert c["period"] > 1 and c["rel_err"] < 1e-8


def test_cp_lower_bound_untwisted():
    lo, det = capacity.lower_bound("CP", 0.0, 0.01, return_details=True)
    assert lo == pytest.approx(0.99, abs=1e-12)
    assert lo <= capacity.upper_bound("CP", 0.0)
    assert det["min_analytic_period"] > 1


def test_rp_lower_bound_uses_billiard(monkeypatch):
    fake = billiard.ScanResult(0.09, 6.0, 2 * np.pi * 0.7, 10, 0, 0.0, 0.0, 0.0)
    monkeypatch.setattr(capacity, "_billiard_scan", lambda eps: fake)
    assert capacity.lower_bound("RP", 0.0, 0.09) == pytest.approx(2 * 0.7, abs=1e-15)
    bad = billiard.ScanResult(0.09, 1.0, 2 * np.pi * 0.7, 10, 0, 0.0, 0.0, 0.0)
    monkeypatch.setattr(capacity, "_billiard_scan", lambda eps: bad)
    with pytest.raises(capacity.CertificationError):
        capacity.lower_bound("RP", 0.0, 0.09)


def test_lower_bound_errors():
    with pytest.raises(ValueError):
        capacity.lower_bound("CP", 0.0, 0.5)
    with pytest.raises(ValueError):
        capacity.lower_bound("RP", 1.0, 0.1)


def test_reports(tmp_path):
    rows = capacity.capacity_table("CP", [0.0, 1.0], 0.1)
    assert [r.s for r in rows] == [0.0, 1.0]
    for r in rows:
        assert r.lower <= r.upper
        assert r.upper_raw == pytest.approx(r.upper * oracles.PRIME_LENGTH)
    capacity.write_reports_json(tmp_path / "c.json", rows)
    data = json.loads((tmp_path / "c.json").read_text())
    assert data[1]["upper"] == rows[1].upper and "diagnostics" in data[0]
    capacity.write_reports_csv(tmp_path / "c.csv", rows)
    table = list(csv.DictReader(open(tmp_path / "c.csv")))
    assert float(table[0]["lower"]) == rows[0].lower


def test_auxiliary_bounds():
    assert capacity.auxiliary_bounds("scaling", rho=2.0, s=1.0) == (1.0, 0.5, 2.0)
    assert capacity.auxiliary_bounds("metric_change", capacity=3.0, a_max=2.0) == 6.0
    val = capacity.auxiliary_bounds("nonconstant_twist", s=0.0, rho=1.0)
    assert val == pytest.approx(oracles.PRIME_LENGTH, abs=1e-10)
    with pytest.raises(ValueError):
        capacity.auxiliary_bounds("scaling", rho=0.0)
    with pytest.raises(ValueError):
        capacity.auxiliary_bounds("volume")
