"""Grid refinement study for the BDF2 stepper.

Runs the smooth sinusoidal initial profile to T = 0.32 on a ladder of
grids with s = 0.01 h, measures the Cauchy difference between
consecutive levels, and writes converge.csv with errors, observed
rates, and average solver iterations per level.

Extra arguments are forwarded to the CLI and override the stock
values, e.g.:

    python scripts/run_convergence.py --levels 32 64 128 --solver pncg2
"""

import sys

from ssfilm.cli import main

STOCK = [
    "converge",
    "--levels", "32", "64", "128", "256",
    "--L", "3.2",
    "--epsilon", "0.1",
    "--T", "0.32",
    "--cfl", "0.01",
    "--solver", "psd",
    "--interp", "bilinear",
    "--out-dir", "results/convergence",
]

if __name__ == "__main__":
    sys.exit(main(STOCK + sys.argv[1:]))
