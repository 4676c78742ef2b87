"""Named invariant suites. Each returns the worst residual over seeded samples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cutmaps, liealg, moments, orbit, symforms
from .config import DEFAULT, Tolerances
from .orbit import TangentPair


@dataclass
class SuiteResult:
    name: str
    residual: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<28s} max residual {self.residual:.3e}  (tol {self.tolerance:.0e}, {self.samples} samples)"


def j_squared(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = orbit.random_point(n, rng)
        v = orbit.random_tangent(x, rng)
        jjv = orbit.complex_structure(x, orbit.complex_structure(x, v))
        worst = max(worst, float(np.max(np.abs(jjv + v))))
    return SuiteResult("j_squared_minus_one", worst, tol.tangency, samples)


def ad_invariance(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        g = liealg.sample("group_su", n, rng)
        X = liealg.sample("algebra_su", n, rng)
        Y = liealg.sample("algebra_su", n, rng)
        a = liealg.killing_inner(liealg.adjoint(g, X), liealg.adjoint(g, Y))
        worst = max(worst, abs(a - liealg.killing_inner(X, Y)))
        br = liealg.adjoint(g, liealg.bracket(X, Y)) - liealg.bracket(liealg.adjoint(g, X), liealg.adjoint(g, Y))
        worst = max(worst, float(np.max(np.abs(br))))
    return SuiteResult("ad_invariance", worst, tol.exponential, samples)


def pairing_identity(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = orbit.random_disc_pair(n, rng, 1.0)
        A = orbit.random_tangent(p.base, rng)
        B = orbit.random_tangent(p.base, rng)
        val = symforms.two_form(p, symforms.vertical_lift(p, A), symforms.horizontal_lift(p, B))
        worst = max(worst, abs(val - liealg.killing_inner(A, B)))
    return SuiteResult("vertical_horizontal_pairing", worst, tol.tangency, samples)


def antiholomorphic(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = orbit.random_point(n, rng)
        v = orbit.random_tangent(x, rng)
        Ix = orbit.involution(x)
        lhs = orbit.involution_tangent(orbit.complex_structure(x, v))
        rhs = orbit.complex_structure(Ix, orbit.involution_tangent(v))
        worst = max(worst, float(np.max(np.abs(lhs + rhs))))
    return SuiteResult("involution_antiholomorphic", worst, tol.tangency, samples)


def bridge_naturality(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        g = liealg.sample("group_su", n, rng)
        x = orbit.random_point(n, rng)
        worst = max(worst, float(np.max(np.abs(orbit.from_line(g @ x.line).matrix - liealg.adjoint(g, x.matrix)))))
    return SuiteResult("bridge_naturality", worst, tol.exponential, samples)


def moment_triangle(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT, s_values=(0.0, 0.5, -0.5, 2.0)) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for s in s_values:
        R = cutmaps.twist_radii(s)
        for _ in range(samples):
            p = orbit.random_disc_pair(n, rng, 1.0)
            a, b = cutmaps.forward_cp(p, R)
            worst = max(worst, moments.triangle_residual(p, moments.mu_product(a, b, R.R1, R.R2), s))
            count += 1
    for _ in range(samples):
        p = orbit.random_disc_pair(n, rng, 1.0, real=True)
        worst = max(worst, moments.triangle_residual(p, moments.mu_real(cutmaps.forward_rp(p))))
        count += 1
    return SuiteResult("moment_triangle", worst, 1e-9, count)


def round_trips(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for s in (0.0, 0.5, 2.0):
        R = cutmaps.twist_radii(s)
        for _ in range(samples // 3 + 1):
            p = orbit.random_disc_pair(n, rng, 1.0)
            q = cutmaps.inverse_cp(*cutmaps.forward_cp(p, R), R)
            worst = max(worst, tangent_pair_gap(p, q))
    for _ in range(samples):
        p = orbit.random_disc_pair(n, rng, 1.0, real=True)
        worst = max(worst, tangent_pair_gap(p, cutmaps.inverse_rp(cutmaps.forward_rp(p))))
    return SuiteResult("cut_map_round_trips", worst, 1e-9, samples)


def cut_pair(n: int, seed: int, samples: int = 100, tol: Tolerances = DEFAULT) -> SuiteResult:
    worst = 0.0
    rs = np.round(np.arange(0.0, 1.0, 0.01), 10)
    for s in (0.0, 0.5, 2.0, 10.0):
        R = cutmaps.twist_radii(s)
        for r in rs:
            worst = max(worst, cutmaps.solve_cut_pair(float(r), R).residual)
    return SuiteResult("cut_pair_residuals", worst, 1e-12, 4 * rs.size)


def pullback(n: int, seed: int, samples: int = 10, frames: int = 3, tol: Tolerances = DEFAULT) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for s in (0.0, 0.5):
        worst = max(worst, cp_pullback_residual(n, s, rng, samples, frames))
    worst = max(worst, rp_pullback_residual(n, rng, samples, frames))
    return SuiteResult("symplectic_pullback", worst, 1e-5, 3 * samples * frames)


def tangent_pair_gap(p: TangentPair, q: TangentPair) -> float:
    return float(max(np.max(np.abs(p.base.matrix - q.base.matrix)), np.max(np.abs(p.vec - q.vec))))


def cp_pullback_residual(n: int, s: float, rng: np.random.Generator, points: int, frames: int, rmax: float = 0.95) -> float:
    R = cutmaps.twist_radii(s)
    F = lambda q: cutmaps.forward_cp(q, R)
    worst = 0.0
    for _ in range(points):
        p = orbit.random_disc_pair(n, rng, rmax)
        a, b = F(p)
        for _ in range(frames):
            xi = symforms.random_tangent_of_tangent(p, rng)
            eta = symforms.random_tangent_of_tangent(p, rng)
            da, db = symforms.differential(F, p, xi)
            ea, eb = symforms.differential(F, p, eta)
            target = R.R1 * symforms.fubini_study(a, da, ea, 1e-6) - R.R2 * symforms.fubini_study(b, db, eb, 1e-6)
            worst = max(worst, abs(symforms.twisted_form(p, s, xi, eta) - target))
    return worst


def rp_pullback_residual(n: int, rng: np.random.Generator, points: int, frames: int, rmax: float = 0.95) -> float:
    worst = 0.0
    for _ in range(points):
        p = orbit.random_disc_pair(n, rng, rmax, real=True)
        a = cutmaps.forward_rp(p)
        for _ in range(frames):
            xi = symforms.random_tangent_of_tangent(p, rng, real=True)
            eta = symforms.random_tangent_of_tangent(p, rng, real=True)
            da = symforms.differential(cutmaps.forward_rp, p, xi)
            ea = symforms.differential(cutmaps.forward_rp, p, eta)
            worst = max(worst, abs(symforms.two_form(p, xi, eta) - symforms.fubini_study(a, da, ea, 1e-6)))
    return worst


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "j_squared_minus_one": j_squared,
    "ad_invariance": ad_invariance,
    "vertical_horizontal_pairing": pairing_identity,
    "involution_antiholomorphic": antiholomorphic,
    "bridge_naturality": bridge_naturality,
    "moment_triangle": moment_triangle,
    "cut_map_round_trips": round_trips,
    "cut_pair_residuals": cut_pair,
    "symplectic_pullback": pullback,
}


def run_all(n: int, seed: int, tol: Tolerances = DEFAULT) -> list[SuiteResult]:
    return [fn(n, seed, tol=tol) for fn in SUITES.values()]
