"""Smoothed spherical billiard ``H = sqrt(|v|^2 + V(theta))`` on S^2.

The potential is zero on the polar caps ``theta <= pi/2 - eps`` and one on
the equatorial band ``|theta - pi/2| <= eps/2``, joined by a quintic
smoothstep. Orbits with ``H < 1`` stay in a cap and bounce off the band.

Two equivalent integrators are provided: the ``(theta, phi, theta_dot,
phi_dot)`` chart used by ``billiard_rhs`` and an ambient ``(q, u)`` form in
R^3 which is regular at the pole and drives the period scan.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .config import DEFAULT

NORTH = np.array([0.0, 0.0, 1.0])
_GL_X, _GL_W = np.polynomial.legendre.leggauss(96)


class StationaryPointError(ValueError):
    pass


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def _dsmoothstep(u):
    inside = (u > 0.0) & (u < 1.0)
    u = np.clip(u, 0.0, 1.0)
    return np.where(inside, 30.0 * u * u * (u - 1.0) ** 2, 0.0)


@dataclass(frozen=True)
class BilliardPotential:
    epsilon: float

    def __post_init__(self):
        if not (0.0 < self.epsilon < 0.5):
            raise ValueError("epsilon must lie in (0, 0.5)")

    def _u(self, theta):
        d = np.pi / 2 - np.abs(np.pi / 2 - np.asarray(theta, dtype=float))
        return (d - (np.pi / 2 - self.epsilon)) / (self.epsilon / 2), np.sign(np.pi / 2 - np.asarray(theta, dtype=float))

    def V(self, theta):
        u, _ = self._u(theta)
        out = _smoothstep(u)
        return float(out) if np.ndim(out) == 0 else out

    def dV(self, theta):
        u, sgn = self._u(theta)
        out = sgn * _dsmoothstep(u) / (self.epsilon / 2)
        return float(out) if np.ndim(out) == 0 else out


def hamiltonian(state, pot: BilliardPotential) -> float:
    th, _, thd, phd = state
    return float(np.sqrt(thd * thd + np.sin(th) ** 2 * phd * phd + pot.V(th)))


def angular_momentum(state) -> float:
    th, _, _, phd = state
    return float(np.sin(th) ** 2 * phd)


def billiard_rhs(state, pot: BilliardPotential) -> np.ndarray:
    """``(1/H)(X - (1/2) grad V^vert)`` in the spherical chart."""
    th, _, thd, phd = state
    H = hamiltonian(state, pot)
    if H == 0.0:
        raise StationaryPointError("H vanishes: the direction of the flow is undefined")
    s, c = np.sin(th), np.cos(th)
    return np.array(
        [
            thd / H,
            phd / H,
            (s * c * phd * phd - 0.5 * pot.dV(th)) / H,
            -2.0 * c / s * thd * phd / H,
        ]
    )


# ---------------------------------------------------------------- ambient form


def chart_to_ambient(state) -> np.ndarray:
    th, ph, thd, phd = state
    st, ct, sp, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
    q = np.array([st * cp, st * sp, ct])
    e_th = np.array([ct * cp, ct * sp, -st])
    e_ph = np.array([-sp, cp, 0.0])
    u = thd * e_th + st * phd * e_ph
    return np.concatenate([q, u])


def ambient_to_chart(y) -> np.ndarray:
    q, u = y[:3], y[3:]
    th = float(np.arccos(np.clip(q[2], -1, 1)))
    ph = float(np.arctan2(q[1], q[0]))
    st = np.sin(th)
    e_th = (np.cos(th) * q - NORTH) / st
    e_ph = np.cross(NORTH, q) / st
    return np.array([th, ph, float(u @ e_th), float(u @ e_ph) / st])


def _ambient_rhs(pot: BilliardPotential):
    def f(_t, y):
        q, u = y[:3], y[3:]
        th = np.arccos(np.clip(q[2], -1.0, 1.0))
        H = np.sqrt(u @ u + pot.V(th))
        acc = -(u @ u) * q
        dv = pot.dV(th)
        if dv != 0.0:
            e_th = (np.cos(th) * q - NORTH) / np.sin(th)
            acc = acc - 0.5 * dv * e_th
        return np.concatenate([u, acc]) / H

    return f


def ambient_energy(y, pot: BilliardPotential) -> float:
    q, u = y[:3], y[3:]
    return float(np.sqrt(u @ u + pot.V(np.arccos(np.clip(q[2], -1, 1)))))


def ambient_momentum(y) -> float:
    q, u = y[:3], y[3:]
    return float(np.cross(q, u)[2])


_RTOL = 1e-12
_ATOL = 1e-13


def integrate_ambient(y0, pot: BilliardPotential, t_end: float, dense: bool = False, events=None):
    return solve_ivp(
        _ambient_rhs(pot), (0.0, t_end), np.asarray(y0, float), method="DOP853",
        rtol=_RTOL, atol=_ATOL, dense_output=dense, events=events,
    )


# ---------------------------------------------------------------- turning points and rotation


def _wall_angle(pot: BilliardPotential, H: float, L: float) -> float:
    """Outer turning point ``V(theta) + L^2/sin^2(theta) = H^2`` in the northern cap."""
    g = lambda th: pot.V(th) + L * L / np.sin(th) ** 2 - H * H
    lo = np.pi / 2 - pot.epsilon
    hi = np.pi / 2 - pot.epsilon / 2
    if g(lo) >= 0:
        raise ValueError("orbit does not reach the ramp")
    return brentq(g, lo, hi, xtol=1e-15, rtol=1e-15)


def wall_state(pot: BilliardPotential, H: float, L: float) -> np.ndarray:
    """Chart state at the outer turning point with ``phi = 0``."""
    th = _wall_angle(pot, H, L)
    return np.array([th, 0.0, 0.0, L / np.sin(th) ** 2])


def _radial_period(pot: BilliardPotential, H: float, L: float):
    """Time and azimuth advance between consecutive outer turning points.

    On the free cap the orbit is a unit-speed great-circle arc, handled in
    closed form; across the ramp the radial quadrature is regularized by
    ``theta = theta_max - w^2``.
    """
    th_e = np.pi / 2 - pot.epsilon
    th_max = _wall_angle(pot, H, L)
    ell = L / H
    cm = np.sqrt(max(1.0 - ell * ell, 0.0))  # cos(theta_min)
    sig_e = float(np.arccos(np.clip(np.cos(th_e) / cm, -1.0, 1.0)))
    dphi_free = 2.0 * np.arctan2(np.sin(sig_e), ell * np.cos(sig_e))
    t_free = 2.0 * sig_e

    # V is a polynomial in theta across the ramp, so after the square-root
    # substitution the integrands are smooth and Gauss-Legendre converges fast
    wmax = np.sqrt(th_max - th_e)
    w = 0.5 * wmax * (_GL_X + 1.0)
    th = th_max - w * w
    g = H * H - pot.V(th) - L * L / np.sin(th) ** 2
    jac = 2.0 * w / np.sqrt(np.maximum(g, 1e-300))
    wts = 0.5 * wmax * _GL_W
    t_ramp = float(np.sum(wts * H * jac))
    p_ramp = float(np.sum(wts * L / np.sin(th) ** 2 * jac))
    return float(t_free + 2.0 * t_ramp), float(dphi_free + 2.0 * p_ramp)


def _max_momentum(pot: BilliardPotential, H: float) -> float:
    """Largest ``L`` for which the orbit still has a free (V = 0) stretch."""
    return H * np.sin(np.pi / 2 - pot.epsilon) * (1 - 1e-9)


def solve_momentum(pot: BilliardPotential, H: float, rot: Fraction) -> float:
    """Angular momentum whose azimuth advance per bounce is ``2 pi rot``."""
    target = 2 * np.pi * float(rot)
    if float(rot) == 0.5:
        return 0.0
    Lmax = _max_momentum(pot, H)
    f = lambda L: _radial_period(pot, H, L)[1] - target
    lo, hi = 1e-9 * H, Lmax
    if f(lo) * f(hi) > 0:
        raise ValueError(f"rotation {rot} not attained at H={H}")
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=200)


@dataclass
class OrbitResult:
    H: float
    L: float
    rotation: Fraction
    period: float
    return_residual: float
    energy_drift: float
    momentum_drift: float
    theta_min: float


def _outer_turning_event(_t, y):
    return -(y[3:] @ NORTH)  # proportional to theta_dot


_outer_turning_event.direction = -1.0


def periodic_orbit(pot: BilliardPotential, H: float, rot: Fraction, tol: float = DEFAULT.return_tol) -> OrbitResult:
    """Integrate the periodic orbit of rotation ``rot`` and measure its first return.

    The start is an outer turning point, so any return to it in phase space
    happens at an outer turning event. The first such event within ``tol``
    of the start gives the period.
    """
    L = solve_momentum(pot, H, rot)
    T_r, _ = _radial_period(pot, H, L)
    q = rot.denominator
    y0 = chart_to_ambient(wall_state(pot, H, L))
    sol = integrate_ambient(y0, pot, (q + 0.5) * T_r, events=_outer_turning_event)
    T, res = None, np.inf
    for t, y in zip(sol.t_events[0], sol.y_events[0]):
        if t < 0.5 * T_r:
            continue
        g = float(np.linalg.norm(y - y0))
        if g < tol:
            T, res = float(t), g
            break
        res = min(res, g)
    if T is None:
        raise RuntimeError(f"orbit did not return (closest gap {res:.3e})")
    E = np.array([ambient_energy(sol.y[:, j], pot) for j in range(sol.y.shape[1])])
    M = np.array([ambient_momentum(sol.y[:, j]) for j in range(sol.y.shape[1])])
    th_min = float(np.arccos(np.max(np.clip(sol.y[2], -1, 1))))
    return OrbitResult(
        H, L, rot, T, res,
        float(np.max(np.abs(E - E[0]))), float(np.max(np.abs(M - M[0]))), th_min,
    )


def default_rotations(qmax: int = 8) -> list[Fraction]:
    out = sorted({Fraction(p, q) for q in range(2, qmax + 1) for p in range(1, q) if 2 * p <= q})
    return out


@dataclass
class ScanResult:
    epsilon: float
    min_period: float
    bound: float
    n_orbits: int
    excluded: int
    max_momentum_drift: float
    max_energy_drift: float
    max_return_residual: float
    argmin: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.n_orbits > 0 and self.min_period > self.bound


def billiard_min_period(
    eps: float,
    energy_cap: float = 0.95,
    energies=None,
    rotations=None,
    tol: float = DEFAULT.return_tol,
) -> ScanResult:
    """Minimum period over a grid of periodic orbits with ``H < energy_cap``."""
    if not (0 < eps <= 0.2):
        raise ValueError("eps must lie in (0, 0.2]")
    if not (0 < energy_cap < 1):
        raise ValueError("energy cap must lie in (0, 1)")
    pot = BilliardPotential(eps)
    if energies is None:
        energies = np.linspace(0.1, energy_cap, 21)[:-1]
    if rotations is None:
        rotations = default_rotations()
    best, arg = np.inf, {}
    n_ok, excluded = 0, 0
    mdrift = edrift = rres = 0.0
    for H in energies:
        if not (0 < H < energy_cap):
            raise ValueError("energies must lie in (0, energy_cap)")
        for rot in rotations:
            try:
                res = periodic_orbit(pot, float(H), rot, tol)
            except (ValueError, RuntimeError):
                excluded += 1
                continue
            if res.return_residual > tol:
                excluded += 1
                continue
            n_ok += 1
            mdrift = max(mdrift, res.momentum_drift)
            edrift = max(edrift, res.energy_drift)
            rres = max(rres, res.return_residual)
            if res.period < best:
                best = res.period
                arg = {"H": res.H, "L": res.L, "rotation": str(res.rotation)}
    if excluded:
        warnings.warn(f"{excluded} orbits excluded from the scan", RuntimeWarning, stacklevel=2)
    return ScanResult(eps, float(best), float(2 * np.pi * (1 - np.sqrt(eps))), n_ok, excluded, mdrift, edrift, rres, arg)


def crossing_angles(pot: BilliardPotential, H: float, L: float, theta_c: float | None = None):
    """Angles between the orbit and the circle ``theta = theta_c`` at consecutive exit and entry."""
    if theta_c is None:
        theta_c = np.pi / 2 - pot.epsilon
    y0 = chart_to_ambient(wall_state(pot, H, L))
    ev = lambda _t, y: y[2] - np.cos(theta_c)
    sol = integrate_ambient(y0, pot, 4 * np.pi, events=ev)
    angles = []
    for y in sol.y_events[0]:
        c = ambient_to_chart(y)
        th, thd, phd = c[0], c[2], c[3]
        angles.append(float(np.arctan2(abs(thd), abs(np.sin(th) * phd))))
    return angles
