"""Minimum periods of the smoothed spherical billiard against 2 pi (1 - sqrt eps)."""

import argparse
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from orbitcap import billiard


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--qmax", type=int, default=8)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for eps in args.eps:
        r = billiard.billiard_min_period(eps, rotations=billiard.default_rotations(args.qmax))
        rows.append({"eps": eps, "min_period": r.min_period, "bound": r.bound, "orbits": r.n_orbits,
                     "excluded": r.excluded, "momentum_drift": r.max_momentum_drift, "argmin": r.argmin})
        print(f"eps={eps}: min {r.min_period:.6f} vs bound {r.bound:.6f} ({r.n_orbits} orbits) at {r.argmin}")
    (out / "billiard_scan.json").write_text(json.dumps(rows, indent=2) + "\n")

    eps = np.array([r["eps"] for r in rows])
    e = np.linspace(0.01, 0.25, 200)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(eps, [r["min_period"] for r in rows], "o-", label="min period")
    ax.plot(e, 2 * np.pi * (1 - np.sqrt(e)), "k--", lw=1, label=r"$2\pi(1-\sqrt{\epsilon})$")
    ax.set_xlabel(r"$\epsilon$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "billiard_scan.png", dpi=120)


if __name__ == "__main__":
    main()
