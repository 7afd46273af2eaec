"""Batch plot jobs.

A PlotJob names the inputs, the plot kind, an optional fit window,
and the output image path; run_job dispatches to the plot functions.
Input files must exist when the job is built; format errors surface
when the job runs and reads them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .plots import plot_complexity, plot_contours, plot_energy, plot_loglog

__all__ = ["PlotJob", "run_job"]

KINDS = ("loglog", "contours", "complexity", "energy")


@dataclass(frozen=True)
class PlotJob:
    """One figure to render from one or more input files."""

    kind: str
    inputs: tuple[str, ...]
    output: str
    window: tuple[float, float] | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("job has no inputs")
        if self.kind != "energy" and len(self.inputs) != 1:
            raise ValueError(f"{self.kind} takes exactly one input")
        for path in self.inputs:
            if not os.path.isfile(path):
                raise ValueError(f"input not found: {path}")


def run_job(job: PlotJob):
    """Render one job; returns what the underlying plot call returns."""
    if job.kind == "loglog":
        return plot_loglog(job.inputs[0], job.output, window=job.window,
                           **job.options)
    if job.kind == "contours":
        return plot_contours(job.inputs[0], job.output, **job.options)
    if job.kind == "complexity":
        return plot_complexity(job.inputs[0], job.output)
    return plot_energy(job.inputs, job.output, **job.options)
