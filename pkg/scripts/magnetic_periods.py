"""Measured first-return periods of the magnetic flow against 2 pi / sqrt(s^2 + kappa r^2)."""

import argparse

import numpy as np

from orbitcap import dynamics, orbit
from orbitcap.orbit import TangentPair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    kappa = dynamics.calibrate_kappa(args.n)
    print(f"kappa = {kappa:.15f}")
    print(f"{'s':>5} {'|v|':>6} {'measured':>18} {'predicted':>18} {'rel err':>9}")
    for s in (0.0, 1.0, 2.0):
        for r in (0.25, 0.5, 1.0):
            x = orbit.random_point(args.n, rng)
            p = TangentPair(x, orbit.random_tangent(x, rng, r), 1.0)
            T = dynamics.measured_period(p, s)
            Tp = dynamics.predicted_period(r, s, kappa)
            print(f"{s:5.2f} {r:6.2f} {T:18.12f} {Tp:18.12f} {abs(T / Tp - 1):9.1e}")


if __name__ == "__main__":
    main()
