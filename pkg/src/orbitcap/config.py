"""Tolerance defaults shared by the numerics and the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    exponential: float = 1e-10
    orbit_membership: float = 1e-10
    tangency: float = 1e-10
    antidiagonal: float = 1e-8
    quadric: float = 1e-8
    fd_step: float = 1e-5
    newton_tol: float = 1e-13
    newton_maxiter: int = 50
    continuation_step: float = 0.01
    r_cap: float = 1.0 - 1e-6
    return_tol: float = 1e-6
    constraint_abort: float = 1e-5

    def with_overrides(self, overrides: dict[str, float]) -> "Tolerances":
        known = {f.name: f.type for f in fields(self)}
        clean = {}
        for key, val in overrides.items():
            if key not in known:
                raise KeyError(f"unknown tolerance {key!r}; known: {sorted(known)}")
            clean[key] = int(val) if key == "newton_maxiter" else float(val)
        return replace(self, **clean)


DEFAULT = Tolerances()
