"""Matrix algebra for su(n+1) and so(n+1).

Elements are plain ``(n+1, n+1)`` numpy arrays. Algebra elements are
skew-Hermitian and traceless, group elements unitary. The inner product is
the negative Killing form ``(X, Y) = -2 tr(XY)``, which is Ad-invariant and
positive definite on skew-Hermitian matrices.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from .config import DEFAULT

SampleKind = Literal["algebra_su", "algebra_so", "group_su", "group_so"]


class DimensionError(ValueError):
    pass


def _check_pair(X: np.ndarray, Y: np.ndarray) -> None:
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"shape mismatch: {X.shape} vs {Y.shape}")


def killing_inner(X: np.ndarray, Y: np.ndarray) -> float:
    _check_pair(X, Y)
    # tr(XY) without forming the product
    return float(-2.0 * np.real(np.sum(X * Y.T)))


def killing_norm(X: np.ndarray) -> float:
    return float(np.sqrt(max(killing_inner(X, X), 0.0)))


def bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    _check_pair(X, Y)
    return X @ Y - Y @ X


def group_exp(X: np.ndarray) -> np.ndarray:
    """Exponential of a skew-Hermitian matrix by unitary diagonalisation.

    ``iX`` is Hermitian, so ``exp(X) = U diag(exp(-i w)) U*`` with
    ``iX = U diag(w) U*``. Real input yields a real (orthogonal) result.
    """
    X = np.asarray(X)
    w, U = np.linalg.eigh(1j * X)
    G = (U * np.exp(-1j * w)) @ U.conj().T
    if np.isrealobj(X):
        return G.real
    return G


def adjoint(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    """``Ad_g X = g X g^{-1}`` for unitary ``g``."""
    _check_pair(g, X)
    return g @ X @ g.conj().T


def skew_hermitian_residual(X: np.ndarray) -> float:
    return float(np.max(np.abs(X + X.conj().T)))


def trace_residual(X: np.ndarray) -> float:
    return float(abs(np.trace(X)))


def unitarity_residual(g: np.ndarray) -> float:
    return float(np.max(np.abs(g @ g.conj().T - np.eye(g.shape[0]))))


def is_algebra_element(X: np.ndarray, tol: float = DEFAULT.algebraic) -> bool:
    return skew_hermitian_residual(X) < tol and trace_residual(X) < tol


def project_su(A: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an arbitrary square matrix onto su(n+1)."""
    X = 0.5 * (A - A.conj().T)
    return X - (np.trace(X) / X.shape[0]) * np.eye(X.shape[0])


def sample(kind: SampleKind, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """Seeded random element of su/so(n+1) or SU/SO(n+1).

    Algebra samples are Gaussian matrices projected onto the algebra; group
    samples are exponentials of algebra samples.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = n + 1
    if kind in ("algebra_su", "group_su"):
        A = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        X = project_su(A)
    elif kind in ("algebra_so", "group_so"):
        A = rng.standard_normal((m, m))
        X = 0.5 * (A - A.T)
    else:
        raise ValueError(f"unknown sample kind {kind!r}")
    if kind.startswith("group"):
        return group_exp(X)
    return X
