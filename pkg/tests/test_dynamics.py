import numpy as np
import pytest

import oracles
from orbitcap import dynamics, liealg, orbit, symforms
from orbitcap.orbit import TangentPair


def _pair(n, r, seed, real=False):
    rng = np.random.default_rng(seed)
    if real:
        x = orbit.random_real_point(n, rng)
        return TangentPair(x, orbit.random_real_tangent(x, rng, r), 1.0)
    x = orbit.random_point(n, rng)
    return TangentPair(x, orbit.random_tangent(x, rng, r), 1.0)


def test_kappa_calibration():
    assert dynamics.calibrate_kappa(1) == pytest.approx(oracles.KAPPA, abs=1e-9)


@pytest.mark.parametrize("s", [0.0, 0.7, -1.5])
def test_vector_field_is_hamiltonian(s):
    # dE(eta) = -omega_s(X, eta) for the kinetic energy E = |v|^2 / 2
    rng = np.random.default_rng(4)
    p = _pair(2, 0.6, 1)
    X = dynamics.magnetic_rhs(p, s)
    for _ in range(3):
        eta = symforms.random_tangent_of_tangent(p, rng)
        dE = symforms.differential(dynamics.kinetic_energy, p, eta)
        assert float(dE) == pytest.approx(-symforms.twisted_form(p, s, X, eta), abs=1e-8)


def test_rhs_is_tangent():
    p = _pair(3, 0.8, 2)
    X = dynamics.magnetic_rhs(p, 1.0)
    assert orbit.tangency_residual(p.base, X.hdot) < 1e-12
    assert np.max(np.abs(X.hdot - p.vec)) == 0.0


@pytest.mark.parametrize("n", [1, 3])
@pytest.mark.parametrize("s,r", [(0.0, 0.5), (1.0, 1.0), (2.0, 0.25)])
def test_measured_period(n, s, r):
    p = _pair(n, r, 3)
    T = dynamics.measured_period(p, s)
    assert T == pytest.approx(dynamics.predicted_period(r, s), rel=1e-5)


def test_conservation_and_record(tmp_path):
    p = _pair(2, 0.5, 5)
    rec = dynamics.integrate(p, 1.0, 3.0, dt=1e-3, store_every=100)
    assert rec.energy_drift < 1e-10 and rec.moment_drift < 1e-10
    assert rec.times[-1] == pytest.approx(3.0)
    path = tmp_path / "flow.csv"
    rec.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("t,z0_re") and len(lines) == len(rec.times) + 1


def test_orbits_stay_in_their_line():
    p = _pair(3, 0.7, 6)
    rec = dynamics.integrate(p, 0.8, 5.0, dt=2e-3, store_every=50)
    assert max(dynamics.plane_residual(p, q.base) for q in rec.states) < 1e-9


def test_time_reversal():
    p = _pair(2, 0.6, 7)
    fwd = dynamics.integrate(p, 1.3, 2.0, dt=1e-3, store_every=10**6).states[-1]
    back = dynamics.integrate(fwd, 1.3, -2.0, dt=1e-3, store_every=10**6).states[-1]
    assert np.max(np.abs(back.base.matrix - p.base.matrix)) < 1e-10
    assert np.max(np.abs(back.vec - p.vec)) < 1e-10


def test_real_orbits_stay_real_when_untwisted():
    p = _pair(2, 0.9, 8, real=True)
    rec = dynamics.integrate(p, 0.0, 4.0, dt=1e-3, store_every=200)
    assert max(orbit.symmetry_residual(q.base) for q in rec.states) < 1e-10


def test_twisted_orbit_has_expected_curvature_radius():
    # s = 0 circles are great circles of diameter pi; larger |s| shrinks them
    p = _pair(1, 1.0, 9)
    dist = lambda s: max(
        orbit.distance(p.base, q.base) for q in dynamics.integrate(p, s, dynamics.predicted_period(1.0, s), dt=2e-3, store_every=1).states
    )
    assert dist(0.0) == pytest.approx(oracles.PRIME_LENGTH / 2, abs=5e-3)
    assert dist(2.0) < dist(1.0) < dist(0.0)


def test_errors():
    p = _pair(1, 0.5, 0)
    with pytest.raises(ValueError):
        dynamics.integrate(p, 0.0, 1.0, dt=0.0)
    with pytest.raises(ValueError):
        dynamics.integrate(p, 0.0, 0.0)
    with pytest.raises(dynamics.ConstraintDriftError):
        dynamics.integrate(p, 0.0, 10.0, dt=2.0)
    zero = TangentPair(p.base, np.zeros_like(p.vec), 1.0)
    with pytest.raises(ValueError):
        dynamics.measured_period(zero, 1.0)


def test_step_preserves_constraints():
    p = _pair(2, 0.5, 11)
    q = dynamics.step(p, 0.5, 0.01)
    assert orbit.membership_residual(q.base.matrix) < 1e-12
    assert orbit.tangency_residual(q.base, q.vec) < 1e-12
    assert liealg.killing_norm(q.vec) == pytest.approx(0.5, rel=1e-9)
