import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitcap import cutmaps, liealg, orbit, symforms
from orbitcap.orbit import TangentPair

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def _pair(seed, n, rmax=1.0, real=False):
    rng = np.random.default_rng(seed)
    return orbit.random_disc_pair(n, rng, rmax, real=real), rng


@given(seeds, dims)
def test_vertical_horizontal_pairing(seed, n):
    p, rng = _pair(seed, n)
    A, B = orbit.random_tangent(p.base, rng), orbit.random_tangent(p.base, rng)
    va, hb = symforms.vertical_lift(p, A), symforms.horizontal_lift(p, B)
    assert symforms.two_form(p, va, hb) == pytest.approx(liealg.killing_inner(A, B), abs=1e-10)
    assert abs(symforms.two_form(p, va, symforms.vertical_lift(p, B))) < 1e-12
    assert abs(symforms.two_form(p, hb, symforms.horizontal_lift(p, A))) < 1e-10


@given(seeds, dims, st.floats(-3, 3))
def test_forms_are_antisymmetric(seed, n, s):
    p, rng = _pair(seed, n)
    xi = symforms.random_tangent_of_tangent(p, rng)
    eta = symforms.random_tangent_of_tangent(p, rng)
    assert symforms.twisted_form(p, s, xi, eta) == pytest.approx(-symforms.twisted_form(p, s, eta, xi), abs=1e-10)
    assert abs(symforms.twisted_form(p, s, xi, xi)) < 1e-10


@given(seeds, dims)
def test_one_form(seed, n):
    p, rng = _pair(seed, n)
    A = orbit.random_tangent(p.base, rng)
    assert symforms.canonical_one_form(p, symforms.vertical_lift(p, A)) == 0.0
    B = orbit.random_tangent(p.base, rng)
    assert symforms.canonical_one_form(p, symforms.horizontal_lift(p, B)) == pytest.approx(
        liealg.killing_inner(p.vec, B), abs=1e-14
    )


@given(seeds, dims)
def test_fubini_study_is_kahler(seed, n):
    rng = np.random.default_rng(seed)
    x = orbit.random_point(n, rng)
    u, w = orbit.random_tangent(x, rng), orbit.random_tangent(x, rng)
    ju = orbit.complex_structure(x, u)
    assert symforms.fubini_study(x, u, ju) == pytest.approx(liealg.killing_inner(u, u), rel=1e-10)
    assert symforms.fubini_study(x, u, w) == pytest.approx(-symforms.fubini_study(x, w, u), abs=1e-10)
    jw = orbit.complex_structure(x, w)
    assert symforms.fubini_study(x, ju, jw) == pytest.approx(symforms.fubini_study(x, u, w), abs=1e-10)


def test_base_mismatch():
    rng = np.random.default_rng(0)
    p, q = orbit.random_disc_pair(2, rng, 1.0), orbit.random_disc_pair(2, rng, 1.0)
    xi = symforms.random_tangent_of_tangent(q, rng)
    with pytest.raises(symforms.BaseMismatchError):
        symforms.two_form(p, xi, xi)


def test_differential_of_linear_map_is_exact():
    M = np.arange(4.0).reshape(2, 2)
    d = symforms.differential(lambda z: M @ z, np.ones(2), np.array([1.0, -1.0]))
    assert np.allclose(d, M @ [1.0, -1.0], atol=1e-10)
    with pytest.raises(ValueError):
        symforms.differential(lambda z: z, np.ones(2), np.ones(2), h=0.0)


def test_random_variations_stay_tangent():
    rng = np.random.default_rng(4)
    p = orbit.random_disc_pair(2, rng, 0.9)
    xi = symforms.random_tangent_of_tangent(p, rng)
    h = 1e-6
    x = orbit.from_matrix(p.base.matrix + h * xi.hdot)
    v = p.vec + h * xi.vdot
    assert orbit.tangency_residual(x, v) < 1e-10


def _zero_section_residual(sign: float, s: float, seed: int) -> float:
    """Pullback gap at the zero section for the form d lambda + sign * s * pi^* omega."""
    rng = np.random.default_rng(seed)
    R = cutmaps.twist_radii(s)
    F = lambda q: cutmaps.forward_cp(q, R)
    x = orbit.random_point(2, rng)
    p = TangentPair(x, 1e-3 * orbit.random_tangent(x, rng, 1.0), 1.0)
    worst = 0.0
    for _ in range(4):
        xi = symforms.random_tangent_of_tangent(p, rng)
        eta = symforms.random_tangent_of_tangent(p, rng)
        a, b = F(p)
        da, db = symforms.differential(F, p, xi)
        ea, eb = symforms.differential(F, p, eta)
        target = R.R1 * symforms.fubini_study(a, da, ea, 1e-6) - R.R2 * symforms.fubini_study(b, db, eb, 1e-6)
        mine = symforms.two_form(p, xi, eta) + sign * s * symforms.fubini_study(p.base, xi.hdot, eta.hdot)
        worst = max(worst, abs(mine - target))
    return worst


@pytest.mark.parametrize("s", [0.5, -1.0, 2.0])
def test_twist_sign_is_forced_at_zero_section(s):
    assert _zero_section_residual(+1.0, s, 3) < 1e-5
    assert _zero_section_residual(-1.0, s, 3) > 1e-2
