"""Head-to-head solver comparison on a stiff coarsening prefix.

Runs the same random initial data with PSD, PNCG1, and PNCG2 and
writes solvers.csv with average iterations and wall time for each.
The conjugate gradient variants should beat plain steepest descent on
this configuration (small epsilon, m = 256).

Extra arguments are forwarded to the CLI, e.g.:

    python scripts/run_compare_solvers.py --T 0.1 --seed 3
"""

import sys

from ssfilm.cli import main

STOCK = [
    "compare-solvers",
    "--m", "256",
    "--L", "12.8",
    "--epsilon", "0.03",
    "--dt", "1e-3",
    "--T", "0.05",
    "--seed", "7",
    "--out-dir", "results/solvers",
]

if __name__ == "__main__":
    sys.exit(main(STOCK + sys.argv[1:]))
