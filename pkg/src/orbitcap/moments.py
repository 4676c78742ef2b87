"""Moment maps for the SU(n+1) and SO(n+1) actions.

Convention: ``d<mu, a> = iota_{a#} omega`` with ``a#`` the infinitesimal
action ``[a, .]``. With this convention the tangent-bundle moment map for
``d lambda + s pi^* omega_FS`` is ``s x - [x, v]``, and the cut maps
intertwine it with ``R1 a - R2 b`` and with ``Re``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import liealg, orbit
from .orbit import OrbitPoint, TangentPair

GroupTag = Literal["SU", "SO"]


class TagMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MomentValue:
    value: np.ndarray
    group_tag: GroupTag = "SU"

    def __post_init__(self):
        if self.group_tag == "SO":
            v = self.value
            if np.max(np.abs(np.imag(v))) > 1e-10 or np.max(np.abs(v + v.T)) > 1e-10:
                raise ValueError("SO moment values must be real antisymmetric")


def mu_tangent(p: TangentPair, s: float = 0.0, group_tag: GroupTag = "SU") -> MomentValue:
    x = p.base.matrix
    jv = orbit.complex_structure(p.base, p.vec, 1e-8)
    val = s * x - jv
    if group_tag == "SO":
        if s != 0.0:
            raise ValueError("the SO moment map is untwisted")
        val = np.real(val).astype(complex)
    return MomentValue(val, group_tag)


def mu_product(a: OrbitPoint, b: OrbitPoint, R1: float = 1.0, R2: float = 1.0) -> MomentValue:
    if a.n != b.n:
        raise liealg.DimensionError("points live on different orbits")
    return MomentValue(R1 * a.matrix - R2 * b.matrix, "SU")


def mu_real(a: OrbitPoint) -> MomentValue:
    return MomentValue(orbit.real_part(a).astype(complex), "SO")


def triangle_residual(p: TangentPair, image: MomentValue, s: float = 0.0) -> float:
    mine = mu_tangent(p, s, image.group_tag)
    return liealg.killing_norm(mine.value - image.value)


def pairing(mu: MomentValue, a: np.ndarray) -> float:
    """``<mu, a>`` through the Killing inner product."""
    return liealg.killing_inner(mu.value, a)
