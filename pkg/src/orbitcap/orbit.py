"""CP^n as the adjoint orbit of ``Z = diag(-i, ..., -i, n i)/(n+1)`` in su(n+1).

Every orbit point carries two synchronized representations: the matrix
``x = i (z z* - I/(n+1))`` used by the bracket formulas, and a unit vector
``z`` (defined up to phase) used for closed-form distances, midpoints and
the quadric test. RP^n is the suborbit of symmetric matrices, i.e. lines
with a real representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import liealg
from .config import DEFAULT


class NotTangentError(ValueError):
    pass


class NoUniqueGeodesicError(ValueError):
    pass


def _line_matrix(z: np.ndarray) -> np.ndarray:
    m = z.shape[0]
    return 1j * (np.outer(z, z.conj()) - np.eye(m) / m)


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    n: int
    matrix: np.ndarray
    line: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.line.setflags(write=False)

    @property
    def x(self) -> np.ndarray:
        return self.matrix


@dataclass(frozen=True, eq=False)
class TangentPair:
    base: OrbitPoint
    vec: np.ndarray
    radius_bound: float = np.inf

    @property
    def r(self) -> float:
        return liealg.killing_norm(self.vec)


def base_point(n: int) -> OrbitPoint:
    if n < 1:
        raise ValueError("n must be >= 1")
    z = np.zeros(n + 1, dtype=complex)
    z[-1] = 1.0
    return OrbitPoint(n, _line_matrix(z), z)


def from_line(z: np.ndarray) -> OrbitPoint:
    z = np.asarray(z, dtype=complex)
    nz = np.linalg.norm(z)
    if nz == 0.0:
        raise ValueError("zero vector does not define a line")
    z = z / nz
    return OrbitPoint(z.shape[0] - 1, _line_matrix(z), z)


def from_matrix(x: np.ndarray) -> OrbitPoint:
    """Retract an (approximate) orbit matrix onto the orbit via its line.

    ``-i x + I/(n+1)`` is the rank-one projector ``z z*``; its column with
    the largest diagonal entry is proportional to ``z``.
    """
    m = x.shape[0]
    P = -1j * x + np.eye(m) / m
    P = 0.5 * (P + P.conj().T)
    k = int(np.argmax(np.real(np.diag(P))))
    z = P[:, k]
    # one power step cleans up a slightly perturbed projector
    z = P @ z
    return from_line(z)


def membership_residual(x: np.ndarray) -> float:
    m = x.shape[0]
    n = m - 1
    eye = np.eye(m)
    return float(np.max(np.abs((x + 1j / m * eye) @ (x - 1j * n / m * eye))))


def bridge_residual(p: OrbitPoint) -> float:
    return float(np.max(np.abs(p.matrix - _line_matrix(p.line))))


def metric_norm_sq(p: OrbitPoint) -> float:
    """``(x, x)`` on the orbit, equal to ``2n/(n+1)``."""
    return liealg.killing_inner(p.matrix, p.matrix)


# ---------------------------------------------------------------- tangents


def tangency_residual(p: OrbitPoint, v: np.ndarray) -> float:
    x = p.matrix
    return float(np.max(np.abs(x @ (x @ v - v @ x) - (x @ v - v @ x) @ x + v)))


def tangent_project(p: OrbitPoint, w: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto ``T_x`` using ``j^2 = -1``: ``-[x, [x, w]]``."""
    x = p.matrix
    return -liealg.bracket(x, liealg.bracket(x, w))


def _require_tangent(p: OrbitPoint, v: np.ndarray, tol: float) -> None:
    res = tangency_residual(p, v)
    scale = max(1.0, float(np.max(np.abs(v))))
    if res > tol * scale:
        raise NotTangentError(f"vector is not tangent at x (residual {res:.3e})")


def complex_structure(p: OrbitPoint, v: np.ndarray, tol: float = DEFAULT.tangency) -> np.ndarray:
    _require_tangent(p, v, tol)
    return liealg.bracket(p.matrix, v)


def stabilizer_project(p: OrbitPoint, w: np.ndarray) -> np.ndarray:
    return w - tangent_project(p, w)


# ---------------------------------------------------------------- geodesics


def geodesic(p: OrbitPoint, u: np.ndarray, t: float, tol: float = 1e-8) -> OrbitPoint:
    """Geodesic with ``gamma(0) = x`` and ``gamma'(0) = u``: ``Ad_{exp(t[x,u])} x``."""
    _require_tangent(p, u, tol)
    xi = liealg.bracket(p.matrix, u)
    g = liealg.group_exp(t * xi)
    # acting on the line keeps both representations exact
    return from_line(g @ p.line)


def geodesic_velocity(p: OrbitPoint, u: np.ndarray, t: float) -> np.ndarray:
    xi = liealg.bracket(p.matrix, u)
    g = liealg.group_exp(t * xi)
    return g @ u @ g.conj().T


def measure_prime_length(p: OrbitPoint, u: np.ndarray, t_max: float = 20.0, samples: int = 4000) -> float:
    """Smallest ``t > 0`` with ``geodesic(x, u/|u|, t) = x``.

    Coarse scan of the return distance, then bisection on the sign of
    ``d/dt |gamma(t) - x|^2``, which flips from negative to positive at the
    return time.
    """
    u = u / liealg.killing_norm(u)
    xi = liealg.bracket(p.matrix, u)
    w, U = np.linalg.eigh(1j * xi)
    x0 = p.matrix
    Ux = U.conj().T @ x0 @ U

    def gamma(t):
        d = np.exp(-1j * w * t)
        return U @ (d[:, None] * Ux * d.conj()[None, :]) @ U.conj().T

    def slope(t):
        g = gamma(t)
        return liealg.killing_inner(g - x0, liealg.bracket(xi, g))

    ts = np.linspace(0.0, t_max, samples + 1)[1:]
    dist = np.array([liealg.killing_norm(gamma(t) - x0) for t in ts])
    # skip the initial departure, then take the first near-return local minimum
    far = int(np.argmax(dist > 0.5 * dist.max()))
    near = np.nonzero(dist[far:] < 0.05 * dist.max())[0]
    if near.size == 0:
        raise RuntimeError("no return within t_max")
    start = far + int(near[0])
    stop = start
    while stop + 1 < len(dist) and dist[stop + 1] < dist[stop]:
        stop += 1
    k = stop
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    if not (slope(lo) < 0 < slope(hi)):
        raise RuntimeError("prime geodesic return not bracketed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return float(0.5 * (lo + hi))


@lru_cache(maxsize=None)
def prime_length(n: int = 1) -> float:
    """Measured length of the prime geodesics of the orbit metric."""
    p = base_point(n)
    u = np.zeros((n + 1, n + 1), dtype=complex)
    u[-1, -2] = 1.0
    u[-2, -1] = -1.0
    u = tangent_project(p, u)
    return float(measure_prime_length(p, u))


@lru_cache(maxsize=None)
def prime_length_rp(n: int = 1) -> float:
    """Measured prime geodesic length of the RP^n suborbit (symmetric start, real direction)."""
    p = base_point(n)
    a = np.zeros((n + 1, n + 1))
    a[-1, -2], a[-2, -1] = 1.0, -1.0
    u = liealg.bracket(a.astype(complex), p.matrix)
    return float(measure_prime_length(p, u))


def distance_scale(n: int = 1) -> float:
    """Ratio between orbit distance and the principal angle ``arccos|<z_a, z_b>|``."""
    return prime_length(n) / np.pi


def overlap(a: OrbitPoint, b: OrbitPoint) -> complex:
    return complex(np.vdot(a.line, b.line))


def distance(a: OrbitPoint, b: OrbitPoint) -> float:
    c = min(abs(overlap(a, b)), 1.0)
    return distance_scale(a.n) * float(np.arccos(c))


def _aligned_frame(a: OrbitPoint, b: OrbitPoint):
    ov = overlap(a, b)
    c = abs(ov)
    phase = np.conj(ov) / c if c > 0 else 1.0
    zb = phase * b.line
    theta = float(np.arccos(min(c, 1.0)))
    if theta < 1e-15:
        return theta, a.line, np.zeros_like(a.line)
    w = zb - np.cos(theta) * a.line
    w = w / np.linalg.norm(w)
    return theta, a.line, w


def is_antidiagonal(a: OrbitPoint, b: OrbitPoint, tol: float = DEFAULT.antidiagonal) -> bool:
    return abs(overlap(a, b)) < tol


def geodesic_fraction(a: OrbitPoint, b: OrbitPoint, tau: float, tol: float = DEFAULT.antidiagonal) -> OrbitPoint:
    """Point at fraction ``tau`` along the unique shortest geodesic from a to b."""
    if is_antidiagonal(a, b, tol):
        raise NoUniqueGeodesicError("no unique shortest geodesic: points are anti-diagonal")
    theta, za, w = _aligned_frame(a, b)
    return from_line(np.cos(tau * theta) * za + np.sin(tau * theta) * w)


def log_direction(a: OrbitPoint, b: OrbitPoint, tol: float = DEFAULT.antidiagonal) -> np.ndarray:
    """Initial velocity ``u`` at a with ``geodesic(a, u, 1) = b`` along the shortest geodesic."""
    if is_antidiagonal(a, b, tol):
        raise NoUniqueGeodesicError("no unique shortest geodesic: points are anti-diagonal")
    theta, za, w = _aligned_frame(a, b)
    return 1j * theta * (np.outer(w, za.conj()) + np.outer(za, w.conj()))


def distance_and_midpoint(a: OrbitPoint, b: OrbitPoint, tol: float = DEFAULT.antidiagonal):
    if is_antidiagonal(a, b, tol):
        raise NoUniqueGeodesicError("no unique shortest geodesic: points are anti-diagonal")
    ov = overlap(a, b)
    c = abs(ov)
    zb = (np.conj(ov) / c) * b.line
    return distance(a, b), from_line(a.line + zb)


# ---------------------------------------------------------------- real structure


def involution(p: OrbitPoint) -> OrbitPoint:
    """``p -> p^T``; on lines this is complex conjugation."""
    return OrbitPoint(p.n, p.matrix.T.copy(), p.line.conj().copy())


def involution_tangent(v: np.ndarray) -> np.ndarray:
    """Differential of the involution (it is linear)."""
    return v.T.copy()


def symmetry_residual(p: OrbitPoint) -> float:
    return float(np.max(np.abs(p.matrix - p.matrix.T)))


def is_real_point(p: OrbitPoint, tol: float = 1e-9) -> bool:
    return symmetry_residual(p) < tol


def quadric_residual(p: OrbitPoint) -> float:
    return float(abs(np.sum(p.line * p.line)))


def real_part(p: OrbitPoint) -> np.ndarray:
    return np.real(p.matrix).copy()


# ---------------------------------------------------------------- sampling


def random_point(n: int, rng: np.random.Generator) -> OrbitPoint:
    z = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    return from_line(z)


def random_real_point(n: int, rng: np.random.Generator) -> OrbitPoint:
    return from_line(rng.standard_normal(n + 1).astype(complex))


def random_tangent(p: OrbitPoint, rng: np.random.Generator, norm: float | None = None) -> np.ndarray:
    v = tangent_project(p, liealg.sample("algebra_su", p.n, rng))
    if norm is not None:
        v = v * (norm / liealg.killing_norm(v))
    return v


def random_real_tangent(p: OrbitPoint, rng: np.random.Generator, norm: float | None = None) -> np.ndarray:
    """Tangent to the RP^n suborbit at a symmetric point: ``[a, x]`` with ``a`` in so(n+1)."""
    a = liealg.sample("algebra_so", p.n, rng).astype(complex)
    v = liealg.bracket(a, p.matrix)
    if norm is not None:
        v = v * (norm / liealg.killing_norm(v))
    return v


def random_disc_pair(n: int, rng: np.random.Generator, rmax: float, real: bool = False) -> TangentPair:
    r = rmax * rng.uniform(0.0, 1.0)
    if real:
        x = random_real_point(n, rng)
        return TangentPair(x, random_real_tangent(x, rng, r), rmax)
    x = random_point(n, rng)
    return TangentPair(x, random_tangent(x, rng, r), rmax)


def standard_tangent(n: int, r: float) -> np.ndarray:
    """The tangent vector ``(r/2) [[0, -i], [-i, 0]]`` in the last 2x2 block at Z."""
    v = np.zeros((n + 1, n + 1), dtype=complex)
    v[-2, -1] = v[-1, -2] = -0.5j * r
    return v
