"""Adjoint-orbit models of CP^n and RP^n: cut maps, flows and capacity brackets."""

from . import billiard, capacity, cutmaps, dynamics, io, liealg, moments, orbit, symforms, verify
from .config import DEFAULT, Tolerances

__all__ = [
    "DEFAULT",
    "Tolerances",
    "billiard",
    "capacity",
    "cutmaps",
    "dynamics",
    "io",
    "liealg",
    "moments",
    "orbit",
    "symforms",
    "verify",
]

__version__ = "0.1.0"
