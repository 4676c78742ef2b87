"""Canonical forms on the tangent bundle of the orbit and on the orbit itself.

The orbit sits in su(n+1) with the Killing metric, so the Levi-Civita
connection is the tangential projection of the ambient derivative. A tangent
vector to TN at ``(x, v)`` is stored as the ambient pair ``(hdot, vdot)``; its
horizontal part is ``hdot`` and its connection (vertical) part is
``tangent_project(x, vdot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import liealg, orbit
from .config import DEFAULT
from .orbit import OrbitPoint, TangentPair


class BaseMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TangentOfTangent:
    at: TangentPair
    hdot: np.ndarray
    vdot: np.ndarray

    @property
    def horizontal(self) -> np.ndarray:
        return self.hdot

    @property
    def connection(self) -> np.ndarray:
        return orbit.tangent_project(self.at.base, self.vdot)


def vertical_lift(p: TangentPair, A: np.ndarray) -> TangentOfTangent:
    return TangentOfTangent(p, np.zeros_like(A), A)


def horizontal_lift(p: TangentPair, B: np.ndarray) -> TangentOfTangent:
    """Parallel-transport lift: ambient fiber derivative is the normal part ``II(B, v)``.

    For the symmetric-space embedding the derivative of ``P_x v`` along ``B``
    contributes ``-[B, [x, v]] - [x, [B, v]]``; only its connection part
    (zero) matters for the forms.
    """
    x = p.base.matrix
    vdot = -liealg.bracket(B, liealg.bracket(x, p.vec)) - liealg.bracket(x, liealg.bracket(B, p.vec))
    vdot = vdot - orbit.tangent_project(p.base, vdot)
    return TangentOfTangent(p, B, vdot)


def _check_base(p: TangentPair, *xis: TangentOfTangent) -> None:
    for xi in xis:
        if xi.at is not p and (
            np.max(np.abs(xi.at.base.matrix - p.base.matrix)) > 1e-12
            or np.max(np.abs(xi.at.vec - p.vec)) > 1e-12
        ):
            raise BaseMismatchError("tangent vector is based at a different point")


def canonical_one_form(p: TangentPair, xi: TangentOfTangent) -> float:
    _check_base(p, xi)
    return liealg.killing_inner(p.vec, xi.hdot)


def two_form(p: TangentPair, xi: TangentOfTangent, eta: TangentOfTangent) -> float:
    """``d lambda(xi, eta) = g(K xi, dpi eta) - g(dpi xi, K eta)``; vertical-first positive."""
    _check_base(p, xi, eta)
    return liealg.killing_inner(xi.connection, eta.hdot) - liealg.killing_inner(xi.hdot, eta.connection)


def fubini_study(x: OrbitPoint, u: np.ndarray, w: np.ndarray, tol: float = 1e-8) -> float:
    """``omega_FS(u, w) = g(j u, w) = ([x, u], w)``."""
    ju = orbit.complex_structure(x, u, tol)
    return liealg.killing_inner(ju, w)


def twisted_form(p: TangentPair, s: float, xi: TangentOfTangent, eta: TangentOfTangent) -> float:
    """Magnetic form ``d lambda + s pi^* omega_FS``.

    This is the sign for which the zero section maps to the diagonal under
    the cut map onto ``R1 omega_FS (-) R2 omega_FS`` with ``R1 - R2 = s``.
    """
    base = two_form(p, xi, eta)
    if s == 0.0:
        return base
    return base + s * fubini_study(p.base, xi.hdot, eta.hdot)


# ---------------------------------------------------------------- finite differences


def _displace(point, step, h: float):
    if isinstance(point, TangentPair):
        hdot, vdot = step
        x = orbit.from_matrix(point.base.matrix + h * hdot)
        v = orbit.tangent_project(x, point.vec + h * vdot)
        return TangentPair(x, v, point.radius_bound)
    if isinstance(point, OrbitPoint):
        return orbit.from_matrix(point.matrix + h * step)
    if isinstance(point, tuple):
        return tuple(_displace(q, d, h) for q, d in zip(point, step))
    return np.asarray(point) + h * np.asarray(step)


def _flatten(value):
    if isinstance(value, TangentPair):
        return (value.base.matrix, value.vec)
    if isinstance(value, OrbitPoint):
        return value.matrix
    if isinstance(value, tuple):
        return tuple(_flatten(q) for q in value)
    return np.asarray(value)


def _diff(plus, minus, h):
    if isinstance(plus, tuple):
        return tuple(_diff(a, b, h) for a, b in zip(plus, minus))
    return (plus - minus) / (2.0 * h)


def differential(fmap: Callable, p, xi, h: float = DEFAULT.fd_step):
    """Central difference ``(F(p + h xi) - F(p - h xi)) / 2h`` with retraction.

    Points may be TangentPairs (``xi`` an ``(hdot, vdot)`` pair or a
    TangentOfTangent), OrbitPoints, tuples of those, or plain arrays. The
    result mirrors the output structure as ambient arrays.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if isinstance(xi, TangentOfTangent):
        xi = (xi.hdot, xi.vdot)
    plus = _flatten(fmap(_displace(p, xi, h)))
    minus = _flatten(fmap(_displace(p, xi, -h)))
    return _diff(plus, minus, h)


def random_tangent_of_tangent(p: TangentPair, rng: np.random.Generator, real: bool = False) -> TangentOfTangent:
    """Random ambient variation ``(hdot, vdot)`` of a tangent pair.

    ``vdot`` includes the normal correction needed to keep ``v`` tangent to
    first order, so finite-difference curves stay on TN.
    """
    x = p.base
    if real:
        hdot = orbit.random_real_tangent(x, rng)
        vt = orbit.random_real_tangent(x, rng)
    else:
        hdot = orbit.random_tangent(x, rng)
        vt = orbit.random_tangent(x, rng)
    hl = horizontal_lift(p, hdot)
    return TangentOfTangent(p, hdot, hl.vdot + vt)
