from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from orbitcap import billiard


@pytest.fixture
def pot():
    return billiard.BilliardPotential(0.1)


def test_potential_shape(pot):
    assert pot.V(0.3) == 0.0 and pot.V(np.pi / 2 - 0.1) == 0.0
    assert pot.V(np.pi / 2) == 1.0 and pot.V(np.pi / 2 - 0.05) == 1.0
    th = np.linspace(0.05, np.pi - 0.05, 201)
    assert np.allclose(pot.V(th), pot.V(np.pi - th), atol=1e-15)
    mid = np.pi / 2 - 0.075
    h = 1e-6
    assert pot.dV(mid) == pytest.approx((pot.V(mid + h) - pot.V(mid - h)) / (2 * h), rel=1e-6)
    assert pot.dV(mid) > 0 and pot.dV(np.pi - mid) < 0
    with pytest.raises(ValueError):
        billiard.BilliardPotential(0.0)


@given(st.floats(0.2, 2.9), st.floats(-3, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_chart_ambient_round_trip(th, ph, thd, phd):
    state = np.array([th, ph, thd, phd])
    back = billiard.ambient_to_chart(billiard.chart_to_ambient(state))
    assert np.allclose(back, state, atol=1e-10)


@given(st.floats(0.3, 1.45), st.floats(-1, 1), st.floats(-1, 1))
def test_chart_and_ambient_fields_agree(th, thd, phd):
    pot = billiard.BilliardPotential(0.2)
    state = np.array([th, 0.4, thd, phd])
    if billiard.hamiltonian(state, pot) < 1e-3:
        return
    chart = billiard.billiard_rhs(state, pot)
    h = 1e-6
    push = (billiard.chart_to_ambient(state + h * chart) - billiard.chart_to_ambient(state - h * chart)) / (2 * h)
    amb = billiard._ambient_rhs(pot)(0.0, billiard.chart_to_ambient(state))
    assert np.allclose(push, amb, atol=1e-7)
    assert billiard.ambient_energy(billiard.chart_to_ambient(state), pot) == pytest.approx(billiard.hamiltonian(state, pot))
    assert billiard.ambient_momentum(billiard.chart_to_ambient(state)) == pytest.approx(billiard.angular_momentum(state))


def test_stationary_point(pot):
    with pytest.raises(billiard.StationaryPointError):
        billiard.billiard_rhs(np.array([0.5, 0.0, 0.0, 0.0]), pot)


def test_conservation(pot):
    y0 = billiard.chart_to_ambient(billiard.wall_state(pot, 0.6, 0.2))
    sol = billiard.integrate_ambient(y0, pot, 30.0)
    E = [billiard.ambient_energy(y, pot) for y in sol.y.T]
    M = [billiard.ambient_momentum(y) for y in sol.y.T]
    assert np.ptp(E) < 1e-8 and np.ptp(M) < 1e-10
    assert np.max(np.abs(np.linalg.norm(sol.y[:3], axis=0) - 1)) < 1e-10


def test_flow_has_unit_speed_on_the_cap(pot):
    # the 1/H normalization makes free motion unit speed for every energy
    for H in (0.2, 0.9):
        y = billiard.chart_to_ambient(np.array([0.5, 0.0, 0.0, H / np.sin(0.5)]))
        dy = billiard._ambient_rhs(pot)(0.0, y)
        assert np.linalg.norm(dy[:3]) == pytest.approx(1.0, rel=1e-14)


def test_diameter_orbit_period(pot):
    res = billiard.periodic_orbit(pot, 0.5, Fraction(1, 2))
    assert res.L == 0.0
    assert res.period == pytest.approx(oracles.BILLIARD_DIAMETER_PERIOD, abs=1e-8)
    # two radial legs make up the diameter orbit
    T, dphi = billiard._radial_period(pot, 0.5, 1e-12)
    assert 2 * T == pytest.approx(res.period, abs=1e-8)
    assert dphi == pytest.approx(np.pi, abs=1e-6)


def test_small_energy_approaches_hard_billiard(pot):
    # as H -> 0 the turning depth in the ramp shrinks like H^(2/3)
    hard = 4 * (np.pi / 2 - 0.1)
    gaps = [billiard.periodic_orbit(pot, H, Fraction(1, 2)).period - hard for H in (1e-2, 1e-3, 1e-4)]
    assert all(g > 0 for g in gaps)
    assert gaps[0] / gaps[1] == pytest.approx(10 ** (2 / 3), rel=0.1)
    assert gaps[2] < 5e-4


@pytest.mark.parametrize("rot", [Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)])
def test_periodic_orbits_close(pot, rot):
    res = billiard.periodic_orbit(pot, 0.7, rot)
    assert res.return_residual < 1e-6
    assert res.momentum_drift < 1e-8 and res.energy_drift < 1e-8
    T, dphi = billiard._radial_period(pot, 0.7, res.L)
    assert dphi == pytest.approx(2 * np.pi * float(rot), abs=1e-10)
    assert res.period == pytest.approx(rot.denominator * T, rel=1e-8)


def test_rotation_is_monotone_in_momentum(pot):
    Ls = np.linspace(0.01, billiard._max_momentum(pot, 0.5), 12)
    dphi = [billiard._radial_period(pot, 0.5, L)[1] for L in Ls]
    assert np.all(np.diff(dphi) < 0)
    assert dphi[0] == pytest.approx(np.pi, abs=0.05)


def test_reflection_law(pot):
    # exit and entry angles at the rim of the free cap coincide
    ang = billiard.crossing_angles(pot, 0.6, 0.25)
    assert len(ang) >= 2
    assert ang[0] == pytest.approx(ang[1], abs=1e-9)


def test_default_rotations():
    rots = billiard.default_rotations()
    assert len(rots) == 11 and all(0 < r <= Fraction(1, 2) for r in rots)
    assert len(set(rots)) == len(rots)


def test_scan_errors():
    with pytest.raises(ValueError):
        billiard.billiard_min_period(0.3)
    with pytest.raises(ValueError):
        billiard.billiard_min_period(0.1, energy_cap=1.5)
    with pytest.raises(ValueError):
        billiard.billiard_min_period(0.1, energies=[0.99])


def test_small_scan():
    res = billiard.billiard_min_period(0.2, energies=[0.3, 0.6], rotations=[Fraction(1, 2), Fraction(1, 3)])
    assert res.n_orbits == 4 and res.excluded == 0
    assert res.passed
    assert res.argmin["rotation"] == "1/2"
