"""Capacity brackets for the twisted CP disc bundles and the RP disc bundle."""

import argparse
from pathlib import Path

import numpy as np

from orbitcap import capacity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--rp-eps", type=float, default=0.05)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    cp = capacity.capacity_table("CP", np.linspace(-3, 3, 13), args.eps, args.n)
    rp = capacity.capacity_table("RP", [0.0], args.rp_eps, args.n)
    capacity.write_reports_csv(out / "capacity.csv", cp + rp)
    capacity.write_reports_json(out / "capacity.json", cp + rp)
    for r in cp + rp:
        print(f"{r.space} s={r.s:+.2f}: [{r.lower:.6f}, {r.upper:.6f}] x {r.l_unit:.6f}")


if __name__ == "__main__":
    main()
