"""Cut maps compactifying disc tangent bundles of CP^n and RP^n.

All maps are expressed through the orbit geodesics. The cut functions are
written in the arc convention where a prime geodesic has length ``pi``; the
conversion to orbit time uses the measured prime length (``time_scale``).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import liealg, orbit
from .config import DEFAULT, Tolerances
from .orbit import NoUniqueGeodesicError, OrbitPoint, TangentPair


class DomainError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class TwistRadii:
    s: float
    R1: float
    R2: float


def twist_radii(s: float) -> TwistRadii:
    h = np.hypot(s, 1.0)
    # the smaller radius in the cancellation-free form
    small = 0.5 / (h + abs(s))
    big = small + abs(s)
    R1, R2 = (big, small) if s >= 0 else (small, big)
    return TwistRadii(float(s), float(R1), float(R2))


@dataclass(frozen=True)
class CutPair:
    r: float
    c1: float
    c2: float
    residual: float
    jac_det: float


def time_scale(n: int) -> float:
    """Orbit time per unit of cut-function arc."""
    return orbit.prime_length(n) / np.pi


# ---------------------------------------------------------------- scalar cut functions


def c_untwisted(r: float) -> float:
    r = float(r)
    if abs(r) >= 2.0:
        raise DomainError("c(r) is defined only for |r| < 2")
    if r == 0.0:
        return 0.25
    return float(np.arcsin(abs(r) / 2.0) / (2.0 * abs(r)))


def f_real(r: float) -> float:
    r = float(r)
    if abs(r) >= 1.0:
        raise DomainError("f(r) is defined only for |r| < 1")
    if r == 0.0:
        return 0.5
    return float(np.arcsin(abs(r)) / (2.0 * abs(r)))


def _tau(x):
    if abs(x) < 1e-2:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2**3 / 5040.0
    return np.sin(x) / x


def _dtau(x):
    if abs(x) < 1e-2:
        x2 = x * x
        return -x / 3.0 + x * x2 / 30.0 - x * x2 * x2 / 840.0
    return (x * np.cos(x) - np.sin(x)) / (x * x)


def _sig(x):
    if abs(x) < 1e-2:
        x2 = x * x
        return 0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2**3 / 40320.0
    return (1.0 - np.cos(x)) / (x * x)


def _dsig(x):
    if abs(x) < 1e-2:
        x2 = x * x
        return -x / 12.0 + x * x2 / 180.0 - x * x2 * x2 / 6720.0
    return (x * np.sin(x) - 2.0 * (1.0 - np.cos(x))) / (x**3)


def cut_residuals(r: float, c1: float, c2: float, radii: TwistRadii) -> tuple[float, float]:
    """Residuals of the two defining equations of the cut pair."""
    R1, R2 = radii.R1, radii.R2
    e1 = R1 * np.sin(2 * c1 * r) + R2 * np.sin(2 * c2 * r) - r
    e2 = R1 * np.cos(2 * c1 * r) - R2 * np.cos(2 * c2 * r) - (R1 - R2)
    return float(e1), float(e2)


def cut_jacobian(r: float, c1: float, c2: float, radii: TwistRadii) -> np.ndarray:
    R1, R2 = radii.R1, radii.R2
    return np.array(
        [
            [2 * r * R1 * np.cos(2 * c1 * r), 2 * r * R2 * np.cos(2 * c2 * r)],
            [-2 * r * R1 * np.sin(2 * c1 * r), 2 * r * R2 * np.sin(2 * c2 * r)],
        ]
    )


def _scaled_system(r, c, R1, R2):
    """The defining system divided by ``r`` and ``r^2``; regular at ``r = 0``."""
    c1, c2 = c
    a1, a2 = 2 * c1 * r, 2 * c2 * r
    g = np.array(
        [
            2 * R1 * c1 * _tau(a1) + 2 * R2 * c2 * _tau(a2) - 1.0,
            4 * R1 * c1 * c1 * _sig(a1) - 4 * R2 * c2 * c2 * _sig(a2),
        ]
    )
    J = np.array(
        [
            [2 * R1 * (_tau(a1) + a1 * _dtau(a1)), 2 * R2 * (_tau(a2) + a2 * _dtau(a2))],
            [4 * R1 * (2 * c1 * _sig(a1) + c1 * a1 * _dsig(a1)), -4 * R2 * (2 * c2 * _sig(a2) + c2 * a2 * _dsig(a2))],
        ]
    )
    return g, J


def cut_pair_at_zero(radii: TwistRadii) -> tuple[float, float]:
    return 1.0 / (2.0 * radii.R1 + 1.0), 1.0 / (2.0 * radii.R2 + 1.0)


def _newton(r, seed, radii, tol: Tolerances):
    c = np.array(seed, dtype=float)
    g, J = _scaled_system(r, c, radii.R1, radii.R2)
    res = float(np.max(np.abs(g)))
    for _ in range(tol.newton_maxiter):
        if res < tol.newton_tol:
            break
        step = np.linalg.solve(J, -g)
        lam = 1.0
        while True:
            trial = c + lam * step
            gt, Jt = _scaled_system(r, trial, radii.R1, radii.R2)
            rt = float(np.max(np.abs(gt)))
            if rt < res or lam < 1e-4:
                break
            lam *= 0.5
        c, g, J, res = trial, gt, Jt, rt
    # polish: near r = 1 the Jacobian degenerates and a tiny residual still hides ~1e-12 in c
    for _ in range(2):
        trial = c + np.linalg.solve(J, -g)
        gt, Jt = _scaled_system(r, trial, radii.R1, radii.R2)
        rt = float(np.max(np.abs(gt)))
        if rt > res:
            break
        c, g, J, res = trial, gt, Jt, rt
    if res >= max(tol.newton_tol, 1e-12):
        raise ConvergenceError(f"Newton did not converge at r={r} (last residual {res:.3e})")
    return c


@lru_cache(maxsize=64)
def _continuation_table(R1: float, R2: float, step: float):
    radii = TwistRadii(R1 - R2, R1, R2)
    grid = np.arange(0.0, 1.0, step)
    out = np.empty((grid.size, 2))
    c = np.array(cut_pair_at_zero(radii))
    for k, r in enumerate(grid):
        c = _newton(float(r), c, radii, DEFAULT)
        out[k] = c
    return grid, out


def solve_cut_pair(r: float, radii: TwistRadii, tol: Tolerances = DEFAULT) -> CutPair:
    """Solve the cut system for ``(c1, c2)`` by Newton continuation in ``r``.

    Seeds come from a cached continuation path started at the closed-form
    ``r = 0`` values, so every solve stays on the branch ``2r(c1+c2) < pi``.
    """
    r = abs(float(r))
    if r >= 1.0:
        raise DomainError("cut pair exists only for r < 1")
    if r > tol.r_cap:
        raise DomainError(f"r={r} exceeds the solver cap {tol.r_cap}")
    grid, table = _continuation_table(radii.R1, radii.R2, tol.continuation_step)
    k = min(int(r / tol.continuation_step), grid.size - 1)
    c = table[k] if grid[k] == r else _newton(r, table[k], radii, tol)
    c1, c2 = float(c[0]), float(c[1])
    if not (0.0 <= 2 * r * (c1 + c2) < np.pi and c1 > 0 and c2 > 0):
        raise ConvergenceError(f"Newton left the principal branch at r={r}")
    e1, e2 = cut_residuals(r, c1, c2, radii)
    det = float(np.linalg.det(cut_jacobian(r, c1, c2, radii)))
    return CutPair(r, c1, c2, max(abs(e1), abs(e2)), det)


def _triangle_angle(p: float, q: float, opposite: float) -> float:
    """Angle between sides ``p`` and ``q`` (Kahan's cancellation-free form)."""
    a, b = max(p, q), min(p, q)
    c = opposite
    num = ((a - b) + c) * (c - (a - b))
    den = (a + (b + c)) * ((a - c) + b)
    return float(2.0 * np.arctan(np.sqrt(max(num, 0.0) / den)))


def closed_form_cut_pair(r: float, radii: TwistRadii) -> tuple[float, float]:
    """Triangle construction of the cut pair, independent of Newton.

    The system says ``R1 e^{i a} - R2 e^{-i b} = s + i r`` with ``a = 2 c1 r``
    and ``b = 2 c2 r``, which is a triangle with sides ``R1``, ``R2`` and
    ``|s + i r|``.
    """
    R1, R2 = radii.R1, radii.R2
    if r == 0.0:
        return cut_pair_at_zero(radii)
    w = complex(R1 - R2, r)
    d = abs(w)
    a = np.angle(w) - _triangle_angle(R1, d, R2)
    # direction of R2 e^{-ib} seen from the vertex w
    b = -(np.angle(w) + np.pi + _triangle_angle(d, R2, R1))
    b = (b + np.pi) % (2 * np.pi) - np.pi
    return float(a / (2 * r)), float(b / (2 * r))


def cut_table(radii: TwistRadii, rs) -> list[CutPair]:
    return [solve_cut_pair(float(r), radii) for r in rs]


def write_cut_table_csv(path, pairs: list[CutPair]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "c1", "c2", "residual"])
        for p in pairs:
            w.writerow([repr(p.r), repr(p.c1), repr(p.c2), repr(p.residual)])


# ---------------------------------------------------------------- CP^n maps


def _check_disc(p: TangentPair, rmax: float) -> float:
    r = p.r
    if r >= rmax:
        raise DomainError(f"|v| = {r} is outside the open disc of radius {rmax}")
    return r


def forward_cp(p: TangentPair, radii: TwistRadii) -> tuple[OrbitPoint, OrbitPoint]:
    """``(x, v) -> (exp_x(-c1 j v), exp_x(c2 j v))`` on the unit disc bundle."""
    r = _check_disc(p, 1.0)
    x = p.base
    if r == 0.0:
        return x, x
    cp = solve_cut_pair(r, radii)
    jv = orbit.complex_structure(x, p.vec, 1e-8)
    k = time_scale(x.n)
    return orbit.geodesic(x, -jv, k * cp.c1), orbit.geodesic(x, jv, k * cp.c2)


def inverse_cp(a: OrbitPoint, b: OrbitPoint, radii: TwistRadii) -> TangentPair:
    if orbit.is_antidiagonal(a, b):
        raise NoUniqueGeodesicError("no unique shortest geodesic: points are anti-diagonal")
    m = orbit.metric_norm_sq(a)
    r2 = 0.5 * (m - liealg.killing_inner(a.matrix, b.matrix))
    r = float(np.sqrt(max(r2, 0.0)))
    if r == 0.0:
        return TangentPair(a, np.zeros_like(a.matrix), 1.0)
    if r >= 1.0:
        raise DomainError("pair lies outside the image of the open unit disc bundle")
    cp = solve_cut_pair(r, radii)
    x = orbit.geodesic_fraction(a, b, cp.c1 / (cp.c1 + cp.c2))
    mu = radii.R1 * a.matrix - radii.R2 * b.matrix
    v = orbit.tangent_project(x, liealg.bracket(x.matrix, mu))
    return TangentPair(x, v, 1.0)


def forward_cp_d2(p: TangentPair) -> tuple[OrbitPoint, OrbitPoint]:
    """Untwisted map on the radius-2 disc bundle, ``2 sin(2 c r) = r``."""
    r = _check_disc(p, 2.0)
    x = p.base
    if r == 0.0:
        return x, x
    c = c_untwisted(r)
    jv = orbit.complex_structure(x, p.vec, 1e-8)
    k = time_scale(x.n)
    return orbit.geodesic(x, -jv, k * c), orbit.geodesic(x, jv, k * c)


def inverse_cp_d2(a: OrbitPoint, b: OrbitPoint) -> TangentPair:
    q = inverse_cp(a, b, twist_radii(0.0))
    return TangentPair(q.base, 2.0 * q.vec, 2.0)


def extended_hamiltonian_cp(a: OrbitPoint, b: OrbitPoint, radii: TwistRadii) -> float:
    """Circle-action Hamiltonian pushed to the product; smooth across the anti-diagonal."""
    l = orbit.prime_length(a.n)
    m = orbit.metric_norm_sq(a)
    mu = radii.R1 * a.matrix - radii.R2 * b.matrix
    mu2 = liealg.killing_inner(mu, mu)
    s = radii.R1 - radii.R2
    return float(l * (np.sqrt(max(mu2 - s * s * (m - 1.0), 0.0)) - abs(s)))


def hamiltonian_cp(p: TangentPair, s: float) -> float:
    """``l (sqrt(s^2 + |v|^2) - |s|)``, generator of a period-one circle action."""
    l = orbit.prime_length(p.base.n)
    return float(l * (np.hypot(s, p.r) - abs(s)))


# ---------------------------------------------------------------- RP^n maps


def forward_rp(p: TangentPair) -> OrbitPoint:
    """``(x, v) -> exp_x(-f(|v|) j v)`` on the unit disc bundle of RP^n."""
    r = _check_disc(p, 1.0)
    x = p.base
    if r == 0.0:
        return x
    f = f_real(r)
    jv = orbit.complex_structure(x, p.vec, 1e-8)
    return orbit.geodesic(x, -jv, time_scale(x.n) * f)


def inverse_rp(q: OrbitPoint, tol: float = DEFAULT.quadric) -> TangentPair:
    if orbit.quadric_residual(q) < tol:
        raise NoUniqueGeodesicError("no unique shortest geodesic: point lies on the quadric")
    qi = orbit.involution(q)
    if orbit.distance(q, qi) == 0.0:
        return TangentPair(q, np.zeros_like(q.matrix), 1.0)
    _, x = orbit.distance_and_midpoint(q, qi)
    # the midpoint of p and its conjugate has a real representative
    x = orbit.from_line(_realify(x.line))
    v = orbit.tangent_project(x, liealg.bracket(x.matrix, orbit.real_part(q).astype(complex)))
    return TangentPair(x, v, 1.0)


def _realify(z: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(z)))
    z = z * (abs(z[k]) / z[k])
    return np.real(z).astype(complex)
