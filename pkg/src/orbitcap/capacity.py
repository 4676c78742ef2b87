"""Hofer-Zehnder capacity brackets for disc tangent bundles of CP^n and RP^n.

Upper bounds are the closed-form symplectic areas of the compactifications.
Lower bounds come from explicit admissible Hamiltonians: a reparametrized
circle-action Hamiltonian for CP^n, and the smoothed billiard for RP^n.
Every value is reported raw and in units of the measured prime length.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from . import billiard, dynamics, orbit
from .cutmaps import TwistRadii, twist_radii
from .orbit import TangentPair

Space = Literal["CP", "RP"]

__all__ = [
    "AdmissibleProfile",
    "CapacityReport",
    "CertificationError",
    "auxiliary_bounds",
    "capacity_table",
    "certify_admissible",
    "l_unit",
    "lower_bound",
    "make_profile",
    "twist_radii",
    "TwistRadii",
    "upper_bound",
]


class CertificationError(RuntimeError):
    pass


def _space(tag: str) -> Space:
    t = tag.upper()
    if t not in ("CP", "RP"):
        raise ValueError(f"unknown space {tag!r}")
    return t  # type: ignore[return-value]


def l_unit(space: str, n: int = 1) -> float:
    return orbit.prime_length(n) if _space(space) == "CP" else orbit.prime_length_rp(n)


def upper_bound(space: str, s: float = 0.0, n: int = 1) -> float:
    """Upper bound in units of ``l_unit(space, n)``."""
    sp = _space(space)
    if sp == "RP":
        if s != 0.0:
            raise ValueError("magnetic twists are supported only on CP^n")
        return 2.0
    return float(np.hypot(s, 1.0) - abs(s))


# ---------------------------------------------------------------- profiles


def _S(u):
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (u * (6.0 * u - 15.0) + 10.0)


def _intS(u):
    """Antiderivative of the smoothstep, zero at 0 and 1/2 at 1."""
    u = np.clip(u, 0.0, 1.0)
    return u**4 * (u * (u - 3.0) + 2.5)


@dataclass(frozen=True)
class AdmissibleProfile:
    """``f`` on ``[0, osc]`` with a trapezoidal derivative and smoothstep ramps.

    ``f' = 0`` on ``[0, a]`` and ``[b, osc]``, rises to ``slope_cap`` over
    ``[a, a+w]``, stays there, and falls back over ``[b-w, b]``.
    """

    osc: float
    eps: float
    slope_cap: float
    plateau_low: float
    plateau_high: float
    ramp: float
    grid: np.ndarray = field(repr=False, compare=False)

    @property
    def a(self) -> float:
        return self.plateau_low

    @property
    def b(self) -> float:
        return self.osc - self.plateau_high

    def fprime(self, h):
        h = np.asarray(h, dtype=float)
        up = _S((h - self.a) / self.ramp)
        down = _S((self.b - h) / self.ramp)
        out = self.slope_cap * np.minimum(up, down)
        return float(out) if out.ndim == 0 else out

    def f(self, h):
        h = np.asarray(h, dtype=float)
        a, b, w, c = self.a, self.b, self.ramp, self.slope_cap
        rise = w * _intS((h - a) / w)
        flat = np.clip(h - (a + w), 0.0, (b - w) - (a + w))
        fall = w * (0.5 - _intS((b - h) / w))
        fall = np.where(h > b - w, fall, 0.0)
        out = c * (rise + flat + fall)
        return float(out) if out.ndim == 0 else out


def make_profile(osc: float, eps: float, grid_points: int = 10_000) -> AdmissibleProfile:
    """Profile with oscillation ``osc - eps`` and slope at most ``1 - eps/(2 osc)``.

    The derivative has to integrate to ``osc - eps`` under the cap, which
    leaves a total of ``osc eps / (2 osc - eps)`` for the two flat ends and
    the ramps. That slack is split evenly into plateau, ramp, ramp, plateau
    units of width ``slack / 3`` (each end gets a full plateau).
    """
    if osc <= 0:
        raise ValueError("oscillation must be positive")
    if not (0 < eps < osc):
        raise ValueError("eps must satisfy 0 < eps < osc")
    cap = 1.0 - eps / (2.0 * osc)
    slack = osc * eps / (2.0 * osc - eps)
    unit = slack / 3.0
    # plateaus + one ramp width in total: 2 * plateau + w = slack
    plateau = unit
    w = slack - 2 * plateau
    grid = np.linspace(0.0, osc, grid_points)
    prof = AdmissibleProfile(osc, eps, cap, plateau, plateau, w, grid)
    if prof.b - prof.a < 2 * w:
        raise ValueError("profile infeasible for these parameters")
    return prof


@dataclass
class Certification:
    ok: bool
    min_analytic_period: float
    max_slope: float
    spot_checks: list
    oscillation: float


def _circle_hamiltonian(space: Space, s: float, n: int):
    """Returns ``(H(p), dH/dE(p))`` for the period-one circle action."""
    l = l_unit(space, n)

    def H(p: TangentPair):
        return float(l * (np.hypot(s, p.r) - abs(s)))

    def dHdE(p: TangentPair):
        return float(l / np.hypot(s, p.r))

    return H, dHdE


def certify_admissible(
    profile: AdmissibleProfile,
    space: str,
    s: float = 0.0,
    n: int = 1,
    spot_levels: int = 5,
    seed: int = 0,
    rel_tol: float = 1e-4,
) -> Certification:
    """Analytic check ``1/f' > 1`` on the grid plus flow spot checks.

    The spot checks pick points on level sets of the circle-action
    Hamiltonian where ``f' > 0``, measure the period of the kinetic flow,
    and convert it to the period of ``X_{f o H} = f'(H) (dH/dE) X_E``.
    Plateau levels carry only constant orbits and are skipped.
    """
    sp = _space(space)
    if sp == "RP" and s != 0.0:
        raise ValueError("magnetic twists are supported only on CP^n")
    fp = profile.fprime(profile.grid)
    if np.any(fp < 0):
        raise CertificationError("profile derivative is negative somewhere")
    max_slope = float(np.max(fp))
    if max_slope >= 1.0:
        raise CertificationError(f"profile slope {max_slope} is not below 1")
    min_period = 1.0 / max_slope
    H, dHdE = _circle_hamiltonian(sp, s, n)
    l = l_unit(sp, n)
    span = l * (np.hypot(s, 1.0) - abs(s))
    rng = np.random.default_rng(seed)
    checks = []
    levels = profile.a + profile.ramp * 0.5 + (profile.b - profile.a - profile.ramp) * (np.arange(spot_levels) + 0.5) / spot_levels
    for h in levels:
        slope = profile.fprime(h)
        if slope <= 0:
            continue
        if h >= span:
            continue
        r = float(np.sqrt((h / l + abs(s)) ** 2 - s * s))
        if sp == "CP":
            x = orbit.random_point(n, rng)
            v = orbit.random_tangent(x, rng, r)
        else:
            x = orbit.random_real_point(n, rng)
            v = orbit.random_real_tangent(x, rng, r)
        p = TangentPair(x, v, 1.0)
        T_E = dynamics.measured_period(p, s)
        T = T_E / (slope * dHdE(p))
        expected = 1.0 / slope
        rel = abs(T / expected - 1.0)
        checks.append({"level": float(h), "slope": float(slope), "period": float(T), "expected": float(expected), "rel_err": float(rel)})
        if rel > rel_tol:
            raise CertificationError(f"flow period {T} disagrees with 1/f' = {expected}")
        if T <= 1.0:
            raise CertificationError(f"nonconstant orbit with period {T} <= 1")
    osc_val = float(profile.f(profile.osc) - profile.f(0.0))
    return Certification(min_period > 1.0, min_period, max_slope, checks, osc_val)


# ---------------------------------------------------------------- bounds and tables


@lru_cache(maxsize=None)
def _billiard_scan(eps: float):
    return billiard.billiard_min_period(eps)


def lower_bound(space: str, s: float = 0.0, eps: float = 0.01, n: int = 1, return_details: bool = False):
    """Certified lower bound in units of ``l_unit(space, n)``."""
    sp = _space(space)
    if not (0 < eps <= 0.2):
        raise ValueError("eps must lie in (0, 0.2]")
    if sp == "CP":
        up = upper_bound("CP", s, n)
        l = l_unit("CP", n)
        prof = make_profile(up * l, eps * l)
        cert = certify_admissible(prof, "CP", s, n)
        if not cert.ok:
            raise CertificationError("CP profile failed certification")
        value = cert.oscillation / l
        details = {"profile": {"osc": prof.osc, "slope_cap": prof.slope_cap, "plateau": prof.plateau_low, "ramp": prof.ramp},
                   "min_analytic_period": cert.min_analytic_period, "spot_checks": cert.spot_checks}
    else:
        if s != 0.0:
            raise ValueError("magnetic twists are supported only on CP^n")
        scan = _billiard_scan(float(eps))
        if not scan.passed:
            raise CertificationError(f"billiard scan minimum {scan.min_period} does not exceed {scan.bound}")
        value = (1.0 - np.sqrt(eps)) * 2.0
        details = {"billiard_min_period": scan.min_period, "billiard_bound": scan.bound, "orbits": scan.n_orbits,
                   "excluded": scan.excluded, "max_momentum_drift": scan.max_momentum_drift}
    return (float(value), details) if return_details else float(value)


@dataclass
class CapacityReport:
    space: str
    n: int
    s: float
    lower: float
    upper: float
    l_unit: float
    eps: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def lower_raw(self) -> float:
        return self.lower * self.l_unit

    @property
    def upper_raw(self) -> float:
        return self.upper * self.l_unit

    def to_dict(self) -> dict:
        return asdict(self)


def capacity_table(space: str, s_values, eps: float, n: int = 1) -> list[CapacityReport]:
    sp = _space(space)
    out = []
    for s in s_values:
        s = float(s)
        up = upper_bound(sp, s, n)
        lo, det = lower_bound(sp, s, eps, n, return_details=True)
        if not lo <= up:
            raise CertificationError(f"bracket violated at s={s}: {lo} > {up}")
        out.append(CapacityReport(sp, n, s, lo, up, l_unit(sp, n), float(eps), det))
    return out


def write_reports_json(path, reports: list[CapacityReport]) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_reports_csv(path, reports: list[CapacityReport]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["space", "n", "s", "lower", "upper", "l_unit", "eps"])
        for r in reports:
            w.writerow([r.space, r.n, repr(r.s), repr(r.lower), repr(r.upper), repr(r.l_unit), repr(r.eps)])


def auxiliary_bounds(kind: str, **params) -> float | tuple:
    """Helper bounds: ``scaling``, ``metric_change`` and ``nonconstant_twist``."""
    if kind == "scaling":
        rho, s = float(params["rho"]), float(params.get("s", 0.0))
        if rho <= 0:
            raise ValueError("rho must be positive")
        return (1.0, s / rho, rho)
    if kind == "metric_change":
        base, a_max = float(params["capacity"]), float(params["a_max"])
        if a_max <= 0 or base < 0:
            raise ValueError("a_max must be positive and the capacity nonnegative")
        return a_max * base
    if kind == "nonconstant_twist":
        s, rho = float(params.get("s", 0.0)), float(params["rho"])
        if rho <= 0:
            raise ValueError("rho must be positive")
        n = int(params.get("n", 1))
        return float(orbit.prime_length(n) * (np.hypot(s, rho) - abs(s)))
    raise ValueError(f"unknown auxiliary bound {kind!r}")
