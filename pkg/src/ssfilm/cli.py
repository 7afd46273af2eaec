"""Command-line driver for simulation runs and the stock experiments.

Subcommands:

* run              one simulation from a key=value config file
* converge         grid-refinement (Cauchy) error table
* complexity       solver residual histories across h and eps
* compare-solvers  average iteration counts of psd / pncg1 / pncg2
* coarsen          long coarsening run with power-law fits

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 stability assertion failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import __version__
from .diagnostics import (
    cauchy_table,
    init_random,
    init_sinusoidal,
    loglog_fit,
    write_records_csv,
)
from .fields import CellField, GridSpec
from .snapshots import SnapshotFormatError, write_snapshot
from .solvers import SolverConfig, SolverError
from .stepping import StabilityError, run
from .system import SchemeParams

__all__ = ["ConfigError", "RunConfig", "parse_config", "main"]


class ConfigError(ValueError):
    """Invalid configuration file or command-line usage."""


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = text.replace(",", " ").split()
    return tuple(float(v) for v in items)


_REQUIRED = ("m", "L", "epsilon", "dt", "T")
_PARSERS = {
    "m": int,
    "L": float,
    "epsilon": float,
    "A": float,
    "dt": float,
    "T": float,
    "solver": str,
    "rel_tol": float,
    "max_iter": int,
    "init": str,
    "seed": int,
    "snapshot_times": _parse_float_list,
    "out_dir": str,
}
_INITS = ("sinusoidal", "random", "zero")


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration mirroring the config-file keys."""

    m: int
    L: float
    epsilon: float
    dt: float
    T: float
    A: float = 1.0 / 16.0
    solver: str = "psd"
    rel_tol: float = 1e-9
    max_iter: int = 500
    init: str = "sinusoidal"
    seed: int = 0
    snapshot_times: tuple[float, ...] = ()
    out_dir: str = "."

    def __post_init__(self) -> None:
        if self.init not in _INITS:
            raise ConfigError(
                f"init must be one of {_INITS}, got {self.init!r}"
            )
        if not (self.T >= self.dt):
            raise ConfigError(f"T={self.T} is shorter than one step {self.dt}")
        try:
            self.grid()
            self.params()
            self.solver_config()
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def grid(self) -> GridSpec:
        return GridSpec(self.m, self.L)

    def params(self) -> SchemeParams:
        return SchemeParams(epsilon=self.epsilon, s=self.dt, A=self.A)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            kind=self.solver, rel_tol=self.rel_tol, max_iter=self.max_iter
        )

    def initial_field(self) -> CellField:
        grid = self.grid()
        if self.init == "sinusoidal":
            return init_sinusoidal(grid)
        if self.init == "random":
            return init_random(grid, self.seed)
        return CellField.zeros(grid)

    def provenance(self, cmd: str) -> list[str]:
        times = " ".join(repr(t) for t in self.snapshot_times)
        return [
            f"ssfilm {__version__} records v1",
            f"cmd: {cmd}",
            f"m={self.m} L={self.L!r} epsilon={self.epsilon!r} "
            f"A={self.A!r} dt={self.dt!r} T={self.T!r}",
            f"solver={self.solver} rel_tol={self.rel_tol!r} "
            f"max_iter={self.max_iter}",
            f"init={self.init} seed={self.seed} "
            f"snapshot_times=[{times}] out_dir={self.out_dir}",
        ]


def parse_config(path) -> RunConfig:
    """Parse a key=value config file; strict about keys."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    raw: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got "
                              f"{text!r}")
        key = key.strip()
        value = value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key: {key}")
        if key in raw:
            raise ConfigError(f"duplicate config key: {key}")
        raw[key] = value

    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"missing required config keys: "
                          f"{', '.join(missing)}")

    kwargs = {}
    for key, value in raw.items():
        try:
            kwargs[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})"
                              ) from exc
    return RunConfig(**kwargs)


class _SnapshotObserver:
    """Writes a snapshot once the run crosses each requested time."""

    def __init__(self, times, out_dir):
        self.pending = sorted(float(t) for t in times)
        self.out_dir = out_dir
        self.count = 0

    def __call__(self, record, state) -> None:
        while self.pending and state.t >= self.pending[0] - 1e-9:
            self.pending.pop(0)
            path = os.path.join(self.out_dir, f"snapshot_{self.count:03d}.dat")
            write_snapshot(path, state.phi_curr, state.t)
            self.count += 1


def _avg_iters(records) -> float:
    return sum(r.iters for r in records) / len(records)


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    os.makedirs(cfg.out_dir, exist_ok=True)
    observers = ()
    if cfg.snapshot_times:
        observers = (_SnapshotObserver(cfg.snapshot_times, cfg.out_dir),)
    records = run(
        cfg.initial_field(), cfg.params(), cfg.solver_config(), cfg.T,
        observers=observers,
    )
    out_csv = os.path.join(cfg.out_dir, "records.csv")
    write_records_csv(out_csv, records, cfg.provenance("run"))
    last = records[-1]
    print(
        f"{len(records)} steps to t={last.t:g}; F_h={last.F_h:.6g} "
        f"roughness={last.roughness:.6g} avg_iters={_avg_iters(records):.2f}"
    )
    print(f"wrote {out_csv}")
    return 0


def cmd_converge(args) -> int:
    solver = SolverConfig(kind=args.solver, rel_tol=args.rel_tol)
    levels, pairs = cauchy_table(
        levels=args.levels,
        L=args.L,
        epsilon=args.epsilon,
        A=args.A,
        T=args.T,
        cfl=args.cfl,
        solver=solver,
        interp=args.interp,
        warm_start=args.warm_start,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    out_csv = os.path.join(args.out_dir, "converge.csv")
    with open(out_csv, "w") as fh:
        fh.write(f"# ssfilm {__version__} converge v1\n")
        fh.write(
            f"# L={args.L!r} epsilon={args.epsilon!r} A={args.A!r} "
            f"T={args.T!r} cfl={args.cfl!r} solver={args.solver} "
            f"interp={args.interp} warm_start={args.warm_start}\n"
        )
        fh.write("m_coarse,m_fine,h_fine,error,rate,avg_iters_fine\n")
        by_m = {lev.m: lev for lev in levels}
        for p in pairs:
            rate = "" if p.rate is None else repr(p.rate)
            fh.write(
                f"{p.m_coarse},{p.m_fine},{p.h_fine!r},{p.error!r},"
                f"{rate},{by_m[p.m_fine].avg_iters!r}\n"
            )
    print(f"{'pair':>12} {'error':>12} {'rate':>6} {'iters':>6}")
    for p in pairs:
        rate = "  --  " if p.rate is None else f"{p.rate:6.2f}"
        lev = next(l for l in levels if l.m == p.m_fine)
        print(
            f"{p.m_coarse:>5}/{p.m_fine:<6} {p.error:12.4e} {rate} "
            f"{lev.avg_iters:6.1f}"
        )
    print(f"wrote {out_csv}")
    return 0


def cmd_complexity(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    out_csv = os.path.join(args.out_dir, "complexity.csv")
    summary_csv = os.path.join(args.out_dir, "complexity_summary.csv")
    rows = []
    summaries = []
    for m in args.ms:
        for eps in args.epsilons:
            grid = GridSpec(m, args.L)
            params = SchemeParams(epsilon=eps, s=args.dt, A=args.A)
            solver = SolverConfig(kind=args.solver, rel_tol=args.rel_tol)
            stats: list = []
            records = run(
                init_sinusoidal(grid), params, solver, args.T,
                stats_sink=stats,
            )
            history = stats[-1].residual_history
            r0 = history[0] if history[0] > 0 else 1.0
            for k, res in enumerate(history):
                rows.append((m, eps, k, res, res / r0))
            summaries.append((m, eps, _avg_iters(records)))
    with open(out_csv, "w") as fh:
        fh.write(f"# ssfilm {__version__} complexity v1\n")
        fh.write(
            f"# L={args.L!r} dt={args.dt!r} T={args.T!r} A={args.A!r} "
            f"solver={args.solver} rel_tol={args.rel_tol!r} "
            f"(final step residual histories)\n"
        )
        fh.write("m,epsilon,iter,residual,rel_residual\n")
        for m, eps, k, res, rel in rows:
            fh.write(f"{m},{eps!r},{k},{res!r},{rel!r}\n")
    with open(summary_csv, "w") as fh:
        fh.write(f"# ssfilm {__version__} complexity summary v1\n")
        fh.write("m,epsilon,avg_iters\n")
        for m, eps, avg in summaries:
            fh.write(f"{m},{eps!r},{avg!r}\n")
    for m, eps, avg in summaries:
        print(f"m={m:<5} epsilon={eps:<6g} avg_iters={avg:.2f}")
    print(f"wrote {out_csv} and {summary_csv}")
    return 0


def cmd_compare_solvers(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    grid = GridSpec(args.m, args.L)
    params = SchemeParams(epsilon=args.epsilon, s=args.dt, A=args.A)
    phi0 = init_random(grid, args.seed)
    results = []
    for kind in ("psd", "pncg1", "pncg2"):
        solver = SolverConfig(kind=kind, rel_tol=args.rel_tol)
        import time as _time

        start = _time.perf_counter()
        records = run(phi0, params, solver, args.T)
        wall = _time.perf_counter() - start
        results.append((kind, _avg_iters(records), wall))
    out_csv = os.path.join(args.out_dir, "solvers.csv")
    with open(out_csv, "w") as fh:
        fh.write(f"# ssfilm {__version__} compare-solvers v1\n")
        fh.write(
            f"# m={args.m} L={args.L!r} epsilon={args.epsilon!r} "
            f"A={args.A!r} dt={args.dt!r} T={args.T!r} seed={args.seed} "
            f"rel_tol={args.rel_tol!r}\n"
        )
        fh.write("solver,avg_iters,wall_s\n")
        for kind, avg, wall in results:
            fh.write(f"{kind},{avg!r},{wall!r}\n")
    for kind, avg, wall in results:
        print(f"{kind:<6} avg_iters={avg:6.2f} wall={wall:.2f}s")
    psd = results[0][1]
    pncg2 = results[2][1]
    ratio = psd / pncg2 if pncg2 > 0 else float("inf")
    print(f"psd/pncg2 iteration ratio: {ratio:.2f}")
    print(f"wrote {out_csv}")
    return 0


def cmd_coarsen(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    grid = GridSpec(args.m, args.L)
    params = SchemeParams(epsilon=args.epsilon, s=args.dt, A=args.A)
    solver = SolverConfig(kind=args.solver, rel_tol=args.rel_tol)
    observers = ()
    if args.snapshots:
        observers = (_SnapshotObserver(args.snapshots, args.out_dir),)
    records = run(
        init_random(grid, args.seed), params, solver, args.T,
        observers=observers,
    )
    out_csv = os.path.join(args.out_dir, "records.csv")
    provenance = [
        f"ssfilm {__version__} records v1",
        "cmd: coarsen",
        f"m={args.m} L={args.L!r} epsilon={args.epsilon!r} A={args.A!r} "
        f"dt={args.dt!r} T={args.T!r}",
        f"solver={args.solver} rel_tol={args.rel_tol!r} max_iter=500",
        f"init=random seed={args.seed} snapshot_times="
        f"[{' '.join(repr(t) for t in args.snapshots)}] "
        f"out_dir={args.out_dir}",
    ]
    write_records_csv(out_csv, records, provenance)

    window = tuple(args.window) if args.window else None
    t = [r.t for r in records]
    # the F_h column stores the expanded quartic form, which omits the
    # constant completing (|grad|^2 - 1)^2; adding L^2/4 restores the
    # sign-definite energy that actually follows the power law
    offset = 0.25 * args.L * args.L
    a_e, b_e = loglog_fit(t, [r.F_h + offset for r in records], window)
    a_m, b_m = loglog_fit(t, [r.roughness for r in records], window)
    fits_csv = os.path.join(args.out_dir, "fits.csv")
    with open(fits_csv, "w") as fh:
        fh.write(f"# ssfilm {__version__} loglog fits (natural log)\n")
        fh.write(f"# energy series is F_h + L^2/4 = F_h + {offset!r}\n")
        fh.write("quantity,a,b\n")
        fh.write(f"energy,{a_e!r},{b_e!r}\n")
        fh.write(f"roughness,{a_m!r},{b_m!r}\n")
    print(f"energy fit:    ln F = {a_e:.5f} {b_e:+.5f} ln t")
    print(f"roughness fit: ln W = {a_m:.5f} {b_m:+.5f} ln t")
    print(f"wrote {out_csv} and {fits_csv}")
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage, which collides with
    # the solver-failure code; route usage errors through ConfigError
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ssfilm", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version",
                        version=f"ssfilm {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="simulate from a config file")
    p_run.add_argument("--config", required=True)
    p_run.set_defaults(func=cmd_run)

    p_conv = sub.add_parser("converge", help="grid refinement error table")
    p_conv.add_argument("--levels", type=int, nargs="+",
                        default=[32, 64, 128, 256])
    p_conv.add_argument("--L", type=float, default=3.2)
    p_conv.add_argument("--epsilon", type=float, default=0.1)
    p_conv.add_argument("--A", type=float, default=1.0 / 16.0)
    p_conv.add_argument("--T", type=float, default=0.32)
    p_conv.add_argument("--cfl", type=float, default=0.01,
                        help="time step as a multiple of h")
    p_conv.add_argument("--solver", default="psd")
    p_conv.add_argument("--rel-tol", type=float, default=1e-9)
    p_conv.add_argument("--interp", choices=("bilinear", "nearest"),
                        default="bilinear")
    p_conv.add_argument("--warm-start",
                        choices=("extrapolated", "current", "zero"),
                        default="extrapolated",
                        help="solver initial iterate per step")
    p_conv.add_argument("--out-dir", default=".")
    p_conv.set_defaults(func=cmd_converge)

    p_cplx = sub.add_parser("complexity",
                            help="residual histories across h and epsilon")
    p_cplx.add_argument("--ms", type=int, nargs="+",
                        default=[128, 256, 512])
    p_cplx.add_argument("--epsilons", type=float, nargs="+", default=[0.1])
    p_cplx.add_argument("--L", type=float, default=3.2)
    p_cplx.add_argument("--dt", type=float, default=1e-3)
    p_cplx.add_argument("--T", type=float, default=0.02)
    p_cplx.add_argument("--A", type=float, default=1.0 / 16.0)
    p_cplx.add_argument("--solver", default="psd")
    p_cplx.add_argument("--rel-tol", type=float, default=1e-9)
    p_cplx.add_argument("--out-dir", default=".")
    p_cplx.set_defaults(func=cmd_complexity)

    p_cmp = sub.add_parser("compare-solvers",
                           help="average iterations of psd/pncg1/pncg2")
    p_cmp.add_argument("--m", type=int, default=256)
    p_cmp.add_argument("--L", type=float, default=12.8)
    p_cmp.add_argument("--epsilon", type=float, default=0.03)
    p_cmp.add_argument("--A", type=float, default=1.0 / 16.0)
    p_cmp.add_argument("--dt", type=float, default=1e-3)
    p_cmp.add_argument("--T", type=float, default=0.05)
    p_cmp.add_argument("--seed", type=int, default=7)
    p_cmp.add_argument("--rel-tol", type=float, default=1e-9)
    p_cmp.add_argument("--out-dir", default=".")
    p_cmp.set_defaults(func=cmd_compare_solvers)

    p_coar = sub.add_parser("coarsen",
                            help="long coarsening run with power-law fits")
    p_coar.add_argument("--m", type=int, default=256)
    p_coar.add_argument("--L", type=float, default=12.8)
    p_coar.add_argument("--epsilon", type=float, default=0.03)
    p_coar.add_argument("--A", type=float, default=1.0 / 16.0)
    p_coar.add_argument("--dt", type=float, default=1e-3)
    p_coar.add_argument("--T", type=float, default=400.0)
    p_coar.add_argument("--seed", type=int, default=7)
    p_coar.add_argument("--solver", default="psd")
    p_coar.add_argument("--rel-tol", type=float, default=1e-6)
    p_coar.add_argument("--window", type=float, nargs=2, default=None,
                        help="fit window [t_min t_max]")
    p_coar.add_argument("--snapshots", type=float, nargs="*", default=[])
    p_coar.add_argument("--out-dir", default=".")
    p_coar.set_defaults(func=cmd_coarsen)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help()
            return 1
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except SnapshotFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except StabilityError as exc:
        print(f"stability assertion failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
