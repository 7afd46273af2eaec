"""Long coarsening run measuring the one-third power laws.

Evolves small random initial data on a 12.8 x 12.8 box to T = 400,
logs per-step diagnostics to records.csv, writes field snapshots at a
few times, and fits log-log power laws on the window [10, 400]:
roughness should grow like t^(1/3) and the shifted energy
F_h + L^2/4 should decay like t^(-1/3).

This is the expensive experiment: roughly 20 minutes single-threaded
at the stock settings.  Extra arguments are forwarded to the CLI,
e.g. a cheaper preview:

    python scripts/run_coarsening.py --m 128 --T 100 --window 10 100
"""

import sys

from ssfilm.cli import main

STOCK = [
    "coarsen",
    "--m", "256",
    "--L", "12.8",
    "--epsilon", "0.03",
    "--dt", "1e-3",
    "--T", "400",
    "--seed", "7",
    "--rel-tol", "1e-6",
    "--window", "10", "400",
    "--snapshots", "1", "10", "100", "400",
    "--out-dir", "results/coarsening",
]

if __name__ == "__main__":
    sys.exit(main(STOCK + sys.argv[1:]))
