"""Solver complexity study: iterations vs grid size and epsilon.

Runs a short smooth evolution on each grid and records the full
residual history of every implicit solve (complexity.csv) plus the
average iterations per step (complexity_summary.csv).  A mesh
independent preconditioner shows flat iteration counts as m grows;
shrinking epsilon makes the systems stiffer and costs more iterations.

Extra arguments are forwarded to the CLI, e.g.:

    python scripts/run_complexity.py --ms 64 128 --solver pncg1
"""

import sys

from ssfilm.cli import main

STOCK = [
    "complexity",
    "--ms", "128", "256", "512",
    "--epsilons", "0.1", "0.05", "0.03",
    "--L", "3.2",
    "--dt", "1e-3",
    "--T", "0.02",
    "--solver", "psd",
    "--out-dir", "results/complexity",
]

if __name__ == "__main__":
    sys.exit(main(STOCK + sys.argv[1:]))
