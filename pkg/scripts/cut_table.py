"""Tabulate the cut pair (c1, c2) on an r-grid for several twists."""

import argparse
from pathlib import Path

import numpy as np

from orbitcap import cutmaps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, nargs="+", default=[0.0, 0.5, 2.0, 10.0])
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    rs = np.round(np.arange(0.0, 1.0, args.step), 10)
    for s in args.s:
        pairs = cutmaps.cut_table(cutmaps.twist_radii(s), rs)
        path = out / f"cut_pairs_s{s:+g}.csv"
        cutmaps.write_cut_table_csv(path, pairs)
        worst = max(p.residual for p in pairs)
        print(f"s={s:+g}: {len(pairs)} rows, max residual {worst:.2e} -> {path}")


if __name__ == "__main__":
    main()
