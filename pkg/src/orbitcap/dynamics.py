"""Geodesic and magnetic geodesic flows on the orbit model.

The flow of the kinetic energy for ``d lambda + s pi^* omega_FS`` satisfies
``x' = v`` and ``nabla_{x'} v = -s j v``. In ambient coordinates the fiber
derivative is the covariant part plus the second fundamental form
``II(v, v) = -[v, [x, v]]``. Integration is classical RK4 on the ambient
pair followed by a retraction onto TN after every step.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import liealg, orbit
from .config import DEFAULT
from .orbit import OrbitPoint, TangentPair
from .symforms import TangentOfTangent


class ConstraintDriftError(RuntimeError):
    pass


class NoReturnError(RuntimeError):
    pass


@dataclass
class PhasePathRecord:
    times: np.ndarray
    states: list
    energy: np.ndarray
    moment_norm: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def energy_drift(self) -> float:
        e0 = self.energy[0]
        return float(np.max(np.abs(self.energy - e0)) / max(abs(e0), 1e-300))

    @property
    def moment_drift(self) -> float:
        m0 = self.moment_norm[0]
        return float(np.max(np.abs(self.moment_norm - m0)) / max(abs(m0), 1e-300))

    def write_csv(self, path) -> None:
        """One row per stored state: time, base line (re/im), fiber entries (re/im), energy, moment norm."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            m = self.states[0].base.line.shape[0]
            head = ["t"]
            head += [f"z{k}_{c}" for k in range(m) for c in ("re", "im")]
            head += [f"v{i}{j}_{c}" for i in range(m) for j in range(m) for c in ("re", "im")]
            head += ["energy", "moment_norm"]
            w.writerow(head)
            for t, st, e, mn in zip(self.times, self.states, self.energy, self.moment_norm):
                z = _canonical_phase(st.base.line)
                row = [f"{t:.12g}"]
                row += [f"{c:.15g}" for zk in z for c in (zk.real, zk.imag)]
                row += [f"{c:.15g}" for vk in st.vec.ravel() for c in (vk.real, vk.imag)]
                row += [f"{e:.15g}", f"{mn:.15g}"]
                w.writerow(row)


def _canonical_phase(z: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(z) > 1e-12 + 0.5 * np.max(np.abs(z))))
    return z * (abs(z[k]) / z[k])


def kinetic_energy(p: TangentPair) -> float:
    return 0.5 * liealg.killing_inner(p.vec, p.vec)


def _accel(x: np.ndarray, v: np.ndarray, s: float) -> np.ndarray:
    xv = x @ v - v @ x
    return -s * xv - (v @ xv - xv @ v)


def magnetic_rhs(p: TangentPair, s: float) -> TangentOfTangent:
    """Vector field of the kinetic energy for the twisted form, as an ambient pair."""
    return TangentOfTangent(p, p.vec.copy(), _accel(p.base.matrix, p.vec, s))


def _rk4(x, v, s, h):
    k1x, k1v = v, _accel(x, v, s)
    x2, v2 = x + 0.5 * h * k1x, v + 0.5 * h * k1v
    k2x, k2v = v2, _accel(x2, v2, s)
    x3, v3 = x + 0.5 * h * k2x, v + 0.5 * h * k2v
    k3x, k3v = v3, _accel(x3, v3, s)
    x4, v4 = x + h * k3x, v + h * k3v
    k4x, k4v = v4, _accel(x4, v4, s)
    xn = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
    vn = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return xn, vn


def _retract(x: np.ndarray, v: np.ndarray):
    pt = orbit.from_matrix(x)
    return pt, orbit.tangent_project(pt, v)


def step(p: TangentPair, s: float, h: float) -> TangentPair:
    xn, vn = _rk4(p.base.matrix, p.vec, s, h)
    pt, vv = _retract(xn, vn)
    return TangentPair(pt, vv, p.radius_bound)


def _moment(p: TangentPair, s: float) -> np.ndarray:
    x = p.base.matrix
    return s * x - liealg.bracket(x, p.vec)


def integrate(
    p0: TangentPair,
    s: float,
    t_end: float,
    dt: float = 1e-3,
    store_every: int = 1,
    abort_tol: float = DEFAULT.constraint_abort,
) -> PhasePathRecord:
    """RK4 with per-step retraction; backward integration for negative ``t_end``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end == 0:
        raise ValueError("t_end must be nonzero")
    nsteps = int(np.ceil(abs(t_end) / dt))
    h = t_end / nsteps
    p = p0
    times, states, en, mn = [0.0], [p0], [kinetic_energy(p0)], [liealg.killing_norm(_moment(p0, s))]
    for k in range(1, nsteps + 1):
        xn, vn = _rk4(p.base.matrix, p.vec, s, h)
        drift = max(orbit.membership_residual(xn), orbit.tangency_residual(orbit.from_matrix(xn), vn))
        if drift > abort_tol:
            raise ConstraintDriftError(f"constraint drift {drift:.3e} at t={k * h:.6g}; reduce dt")
        pt, vv = _retract(xn, vn)
        p = TangentPair(pt, vv, p0.radius_bound)
        if k % store_every == 0 or k == nsteps:
            times.append(k * h)
            states.append(p)
            en.append(kinetic_energy(p))
            mn.append(liealg.killing_norm(_moment(p, s)))
    return PhasePathRecord(np.array(times), states, np.array(en), np.array(mn), {"s": s, "dt": abs(h)})


def predicted_period(r: float, s: float, kappa: float = 1.0) -> float:
    return float(2 * np.pi / np.sqrt(s * s + kappa * r * r))


def _state_gap(p: TangentPair, q: TangentPair) -> float:
    return float(
        np.max(np.abs(p.base.matrix - q.base.matrix)) + np.max(np.abs(p.vec - q.vec))
    )


def _gap_slope(p: TangentPair, p0: TangentPair, s: float) -> float:
    dx = p.base.matrix - p0.base.matrix
    dv = p.vec - p0.vec
    return liealg.killing_inner(dx, p.vec) + liealg.killing_inner(dv, _accel(p.base.matrix, p.vec, s))


def first_return(p0: TangentPair, s: float, t_guess: float, steps_per_period: int = 4000, budget: float = 3.0):
    """First return time to ``p0`` in phase space and the residual there.

    The squared ambient gap is tracked step by step; after the trajectory
    has left the start, the first local minimum of the gap is refined by
    bisection on its time derivative.
    """
    h = t_guess / steps_per_period
    p = p0
    t = 0.0
    gaps = []
    left = False
    prev_slope = None
    t_max = budget * t_guess
    while t < t_max:
        q = step(p, s, h)
        sl = _gap_slope(q, p0, s)
        g = _state_gap(q, p0)
        if not left and g > 0.1 * max(p0.r, 1e-3):
            left = True
        if left and prev_slope is not None and prev_slope < 0 <= sl:
            lo_state, lo_t = p, t
            a, b = 0.0, h
            for _ in range(60):
                mid = 0.5 * (a + b)
                qm = step(lo_state, s, mid)
                if _gap_slope(qm, p0, s) < 0:
                    a = mid
                else:
                    b = mid
            tr = lo_t + 0.5 * (a + b)
            qm = step(lo_state, s, 0.5 * (a + b))
            return tr, _state_gap(qm, p0)
        prev_slope = sl if left else None
        gaps.append(g)
        p, t = q, t + h
    raise NoReturnError(f"no return within {budget} x predicted period")


@lru_cache(maxsize=None)
def calibrate_kappa(n: int = 1) -> float:
    """``(2 pi / l)^2`` with ``l`` the measured unit-speed period of the geodesic flow."""
    x = orbit.base_point(n)
    u = orbit.tangent_project(x, orbit.standard_tangent(n, 1.0))
    u = u / liealg.killing_norm(u)
    p = TangentPair(x, u)
    l_guess = orbit.prime_length(n)
    T, _ = first_return(p, 0.0, l_guess)
    return float((2 * np.pi / T) ** 2)


def measured_period(p0: TangentPair, s: float, tol: float = DEFAULT.return_tol) -> float:
    r = p0.r
    if r <= 0:
        raise ValueError("period is undefined at rest points")
    kappa = calibrate_kappa(p0.base.n)
    T_pred = predicted_period(r, s, kappa)
    T, gap = first_return(p0, s, T_pred)
    if gap > tol:
        raise NoReturnError(f"return residual {gap:.3e} exceeds {tol}")
    return T


def plane_residual(p0: TangentPair, q: OrbitPoint) -> float:
    """Distance of ``q``'s line from the complex 2-plane of the CP^1 through ``(x0, v0)``."""
    z0 = p0.base.line
    w = -1j * (p0.vec @ z0)
    w = w - np.vdot(z0, w) * z0
    nw = np.linalg.norm(w)
    basis = [z0] if nw < 1e-14 else [z0, w / nw]
    z = q.line
    proj = sum(np.vdot(b, z) * b for b in basis)
    return float(np.linalg.norm(z - proj))
