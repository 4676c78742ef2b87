"""JSON serialization for orbit points and tangent pairs."""

from __future__ import annotations

import json

import numpy as np

from . import orbit
from .orbit import OrbitPoint, TangentPair


def _canonical(z: np.ndarray) -> np.ndarray:
    """Fix the phase so the first entry of maximal modulus is real positive."""
    k = int(np.argmax(np.abs(z) >= np.max(np.abs(z)) * (1 - 1e-12)))
    out = z * (abs(z[k]) / z[k])
    out[k] = abs(z[k])
    return out


def _cplx_list(a) -> list:
    return [[float(c.real), float(c.imag)] for c in np.ravel(a)]


def point_to_dict(p: OrbitPoint) -> dict:
    z = _canonical(p.line)
    m = p.matrix
    return {
        "n": p.n,
        "line": _cplx_list(z),
        "matrix": [_cplx_list(row) for row in m],
    }


def point_from_dict(d: dict) -> OrbitPoint:
    if "line" not in d:
        raise ValueError("point JSON requires a 'line' entry")
    z = np.array([complex(re, im) for re, im in d["line"]])
    if "n" in d and int(d["n"]) != z.shape[0] - 1:
        raise ValueError("'n' does not match the length of 'line'")
    return orbit.from_line(z)


def pair_to_dict(p: TangentPair) -> dict:
    d = point_to_dict(p.base)
    d["vec"] = [_cplx_list(row) for row in p.vec]
    return d


def pair_from_dict(d: dict) -> TangentPair:
    x = point_from_dict(d)
    v = np.array([[complex(re, im) for re, im in row] for row in d["vec"]])
    return TangentPair(x, orbit.tangent_project(x, v))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
