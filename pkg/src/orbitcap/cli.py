"""Command-line entry point: ``orbitcap {verify,capacity,flow,billiard,map}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import billiard, capacity, cutmaps, dynamics, io, orbit, verify
from .config import DEFAULT, Tolerances
from .orbit import NoUniqueGeodesicError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 1
    s: list = field(default_factory=lambda: [0.0])
    eps: float | None = None
    seed: int = 0
    dt: float = 1e-3
    t_end: float = 1.0
    output: str | None = None
    plot: bool = False
    space: str = "cp"
    direction: str = "fwd"
    input: str | None = None
    tol: Tolerances = DEFAULT

    def validate(self) -> None:
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.eps is not None and not (0 < self.eps <= 0.2):
            raise UsageError("--eps must lie in (0, 0.2]")
        if self.dt <= 0:
            raise UsageError("--dt must be positive")
        if self.space not in ("cp", "rp"):
            raise UsageError("--space must be cp or rp")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ORBITCAP_THREADS", "1")))
    except ValueError:
        return 1


def _parse_s(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --s list {text!r}") from exc


def _parse_tol(items) -> Tolerances:
    over = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects KEY=VAL, got {item!r}")
        k, v = item.split("=", 1)
        over[k.strip()] = float(v)
    try:
        return DEFAULT.with_overrides(over)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", choices=["cp", "rp"], default="cp")
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--s", type=_parse_s, default=[0.0])
    common.add_argument("--eps", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dt", type=float, default=1e-3)
    common.add_argument("--t-end", dest="t_end", type=float, default=1.0)
    common.add_argument("--output", default=None)
    common.add_argument("--plot", action="store_true")
    common.add_argument("--tol", action="append", metavar="KEY=VAL")

    p = argparse.ArgumentParser(prog="orbitcap", description="Adjoint-orbit cut maps, flows and capacity brackets.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the invariant suites")
    sub.add_parser("capacity", parents=[common], help="write a capacity table")
    sub.add_parser("flow", parents=[common], help="integrate the magnetic flow and write a trajectory CSV")
    sub.add_parser("billiard", parents=[common], help="scan billiard periods for a list of eps values")
    mp = sub.add_parser("map", parents=[common], help="apply a cut map or its inverse to a point JSON")
    mp.add_argument("--direction", choices=["fwd", "inv"], default="fwd")
    mp.add_argument("--input", required=True)
    return p


def _config(ns) -> RunConfig:
    cfg = RunConfig(
        command=ns.command, n=ns.n, s=ns.s, eps=ns.eps, seed=ns.seed, dt=ns.dt, t_end=ns.t_end,
        output=ns.output, plot=ns.plot, space=ns.space,
        direction=getattr(ns, "direction", "fwd"), input=getattr(ns, "input", None),
        tol=_parse_tol(ns.tol),
    )
    cfg.validate()
    return cfg


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_all(cfg.n, cfg.seed, cfg.tol)
    lines = [r.line() for r in results]
    _emit("\n".join(lines) + "\n", cfg.output)
    if cfg.output:
        print("\n".join(lines))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"failing invariant(s): {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_capacity(cfg: RunConfig) -> int:
    space = cfg.space.upper()
    eps = cfg.eps if cfg.eps is not None else (0.01 if space == "CP" else 0.04)
    s_values = cfg.s if space == "CP" else [0.0]
    if space == "RP" and any(s != 0.0 for s in cfg.s):
        raise UsageError("magnetic twists are supported only for --space cp")
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        rows = list(ex.map(lambda s: capacity.capacity_table(space, [s], eps, cfg.n)[0], s_values))
    header = "space,n,s,lower,upper,l_unit,eps\n"
    body = "".join(f"{r.space},{r.n},{r.s!r},{r.lower!r},{r.upper!r},{r.l_unit!r},{r.eps!r}\n" for r in rows)
    if cfg.output and cfg.output.endswith(".json"):
        _emit(json.dumps([r.to_dict() for r in rows], indent=2, sort_keys=True) + "\n", cfg.output)
    else:
        _emit(header + body, cfg.output)
    if cfg.plot:
        _plot_capacity(rows, (cfg.output or "capacity") + ".png")
    return EXIT_OK


def cmd_flow(cfg: RunConfig) -> int:
    if cfg.space != "cp" and any(s != 0 for s in cfg.s):
        raise UsageError("magnetic twists are supported only for --space cp")
    rng = np.random.default_rng(cfg.seed)
    p = orbit.random_disc_pair(cfg.n, rng, 1.0, real=(cfg.space == "rp"))
    rec = dynamics.integrate(p, cfg.s[0], cfg.t_end, cfg.dt, abort_tol=cfg.tol.constraint_abort)
    path = cfg.output or "trajectory.csv"
    rec.write_csv(path)
    print(f"wrote {len(rec.times)} states to {path}; energy drift {rec.energy_drift:.2e}, moment drift {rec.moment_drift:.2e}")
    return EXIT_OK


def cmd_billiard(cfg: RunConfig) -> int:
    eps_list = [cfg.eps] if cfg.eps is not None else [0.2, 0.1, 0.05]
    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        scans = list(ex.map(billiard.billiard_min_period, eps_list))
    text = "eps,min_period,bound,orbits,excluded,max_momentum_drift\n"
    text += "".join(f"{r.epsilon!r},{r.min_period!r},{r.bound!r},{r.n_orbits},{r.excluded},{r.max_momentum_drift!r}\n" for r in scans)
    _emit(text, cfg.output)
    if cfg.plot:
        _plot_billiard(scans, (cfg.output or "billiard") + ".png")
    return EXIT_OK if all(r.passed for r in scans) else EXIT_FAIL


def cmd_map(cfg: RunConfig) -> int:
    with open(cfg.input) as fh:
        data = json.load(fh)
    R = cutmaps.twist_radii(cfg.s[0])
    if cfg.space == "cp":
        if cfg.direction == "fwd":
            a, b = cutmaps.forward_cp(io.pair_from_dict(data), R)
            out = {"a": io.point_to_dict(a), "b": io.point_to_dict(b), "s": cfg.s[0]}
        else:
            q = cutmaps.inverse_cp(io.point_from_dict(data["a"]), io.point_from_dict(data["b"]), R)
            out = io.pair_to_dict(q)
            out["s"] = cfg.s[0]
    else:
        if cfg.direction == "fwd":
            out = io.point_to_dict(cutmaps.forward_rp(io.pair_from_dict(data)))
        else:
            out = io.pair_to_dict(cutmaps.inverse_rp(io.point_from_dict(data), cfg.tol.quadric))
    _emit(io.dumps(out), cfg.output)
    return EXIT_OK


def _plot_capacity(rows, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    s = np.linspace(-3, 3, 301)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(s, np.hypot(s, 1) - np.abs(s), "k-", lw=1, label="upper bound")
    ax.plot([r.s for r in rows], [r.lower for r in rows], "o", label="certified lower")
    ax.set_xlabel("s")
    ax.set_ylabel("capacity / l")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_billiard(scans, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    eps = np.array([r.epsilon for r in scans])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(eps, [r.min_period for r in scans], "o-", label="min period")
    e = np.linspace(min(eps) * 0.8, max(eps) * 1.1, 100)
    ax.plot(e, 2 * np.pi * (1 - np.sqrt(e)), "k--", lw=1, label="2 pi (1 - sqrt eps)")
    ax.set_xlabel("eps")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


COMMANDS = {"verify": cmd_verify, "capacity": cmd_capacity, "flow": cmd_flow, "billiard": cmd_billiard, "map": cmd_map}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoUniqueGeodesicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (cutmaps.DomainError, capacity.CertificationError, dynamics.ConstraintDriftError,
            dynamics.NoReturnError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
