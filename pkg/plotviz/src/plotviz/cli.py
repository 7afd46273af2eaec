"""Command line for the stock figures.

    plotviz loglog records.csv --window 10 400 --energy-offset 40.96
    plotviz contours snapshot_003.dat --what both
    plotviz complexity complexity.csv
    plotviz energy runA.csv runB.csv --labels "s=1e-3" "s=1e-2"

Exit codes: 0 success, 1 bad arguments or unreadable/malformed input.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .jobs import PlotJob, run_job

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotviz", description="plots for simulation CSV/snapshot files"
    )
    parser.add_argument("--version", action="version",
                        version=f"plotviz {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_log = sub.add_parser("loglog", help="power-law fit figure")
    p_log.add_argument("csv")
    p_log.add_argument("--out", default="loglog.png")
    p_log.add_argument("--window", type=float, nargs=2, default=None,
                       metavar=("T0", "T1"))
    p_log.add_argument("--series", nargs="+",
                       choices=("roughness", "energy"),
                       default=["roughness", "energy"])
    p_log.add_argument("--energy-offset", type=float, default=0.0,
                       help="added to F_h before fitting (use L^2/4)")

    p_con = sub.add_parser("contours", help="field / Laplacian contours")
    p_con.add_argument("snapshot")
    p_con.add_argument("--out", default="contours.png")
    p_con.add_argument("--what", choices=("field", "laplacian", "both"),
                       default="both")

    p_cpx = sub.add_parser("complexity", help="residual history figure")
    p_cpx.add_argument("csv")
    p_cpx.add_argument("--out", default="complexity.png")

    p_en = sub.add_parser("energy", help="records column vs time overlay")
    p_en.add_argument("csvs", nargs="+")
    p_en.add_argument("--out", default="energy.png")
    p_en.add_argument("--labels", nargs="*", default=None)
    p_en.add_argument("--column", default="F_h")
    return parser


def _job_from_args(args) -> PlotJob:
    if args.command == "loglog":
        return PlotJob("loglog", (args.csv,), args.out,
                       window=tuple(args.window) if args.window else None,
                       options={"series": tuple(args.series),
                                "energy_offset": args.energy_offset})
    if args.command == "contours":
        return PlotJob("contours", (args.snapshot,), args.out,
                       options={"what": args.what})
    if args.command == "complexity":
        return PlotJob("complexity", (args.csv,), args.out)
    return PlotJob("energy", tuple(args.csvs), args.out,
                   options={"labels": args.labels, "column": args.column})


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    try:
        job = _job_from_args(args)
        run_job(job)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {job.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
