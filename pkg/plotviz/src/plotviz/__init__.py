"""Plots for thin-film simulation outputs.

Consumes the simulator's two on-disk formats, per-step records CSV
and ssfield v1 snapshots, and renders the stock figures: log-log
power-law fits, residual complexity curves, energy-vs-time families,
and field/Laplacian contours. Deliberately independent of the
simulator package: the file formats are the interface.
"""

__version__ = "0.1.0"

from .fits import loglog_fit
from .io import SnapshotFormatError, read_records_csv, read_snapshot
from .jobs import PlotJob, run_job
from .plots import plot_complexity, plot_contours, plot_energy, plot_loglog
from .stencil import laplacian_5pt

__all__ = [
    "PlotJob",
    "SnapshotFormatError",
    "laplacian_5pt",
    "loglog_fit",
    "plot_complexity",
    "plot_contours",
    "plot_energy",
    "plot_loglog",
    "read_records_csv",
    "read_snapshot",
    "run_job",
    "__version__",
]
