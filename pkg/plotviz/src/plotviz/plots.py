"""The four stock figures.

Every function reads its inputs, writes exactly one image file, and
touches nothing else on disk. plot_loglog also prints its fitted
(a, b) per series with full precision.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fits import loglog_fit
from .io import read_records_csv, read_snapshot
from .stencil import laplacian_5pt

__all__ = [
    "plot_complexity",
    "plot_contours",
    "plot_energy",
    "plot_loglog",
]


def _need(cols: dict, name: str, path) -> np.ndarray:
    if name not in cols:
        raise ValueError(f"no column {name!r} in {path}")
    return cols[name]


def plot_loglog(csv_path, out_path, *, window=None,
                series=("roughness", "energy"), energy_offset: float = 0.0,
                ) -> dict[str, tuple[float, float]]:
    """Log-log scatter of roughness and/or shifted energy with fits.

    series entries are "roughness" (the roughness column) and "energy"
    (the F_h column plus energy_offset; pass L^2/4 to undo the
    simulator's expanded form). Prints and returns {name: (a, b)} with
    ln y = a + b ln t on the window.
    """
    if not series:
        raise ValueError("no series requested")
    cols = read_records_csv(csv_path)
    t = _need(cols, "t", csv_path)
    fits: dict[str, tuple[float, float]] = {}
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for name in series:
        if name == "roughness":
            y = _need(cols, "roughness", csv_path)
        elif name == "energy":
            y = _need(cols, "F_h", csv_path) + energy_offset
        else:
            raise ValueError(f"unknown series {name!r}")
        a, b = loglog_fit(t, y, window)
        fits[name] = (a, b)
        print(f"loglog fit {name}: a={a!r} b={b!r}")
        keep = slice(None, None, max(1, len(t) // 400))
        ax.loglog(t[keep], y[keep], ".", ms=3, alpha=0.5,
                  label=f"{name}: slope {b:.3f}")
        lo = t[t > 0].min() if np.any(t > 0) else 1.0
        tt = np.geomspace(lo, t.max(), 50)
        ax.loglog(tt, np.exp(a) * tt ** b, "-", lw=1)
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return fits


def plot_contours(snap_path, out_path, *, what: str = "both") -> None:
    """Filled contours of a snapshot field and/or its 5-point Laplacian."""
    if what not in ("field", "laplacian", "both"):
        raise ValueError(f"unknown contour choice {what!r}")
    values, L, t = read_snapshot(snap_path)
    m = values.shape[0]
    h = L / m
    panels = []
    if what in ("field", "both"):
        panels.append(("u", values))
    if what in ("laplacian", "both"):
        panels.append(("lap u", laplacian_5pt(values, h)))

    # cell centers at (i + 1/2) h; values[i, j] has x index i, so
    # transpose for imshow-style orientation with x horizontal
    coords = (np.arange(m) + 0.5) * h
    fig, axes = plt.subplots(1, len(panels),
                             figsize=(4.6 * len(panels), 4.0))
    axes = np.atleast_1d(axes)
    for ax, (label, field) in zip(axes, panels):
        cs = ax.contourf(coords, coords, field.T, levels=20)
        fig.colorbar(cs, ax=ax, shrink=0.85)
        ax.set_title(f"{label} at t={t:g} (m={m})", fontsize=9)
        ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def plot_complexity(csv_path, out_path) -> None:
    """Relative residual vs iteration, one curve per (m, epsilon)."""
    cols = read_records_csv(csv_path)
    ms = _need(cols, "m", csv_path).astype(int)
    eps = _need(cols, "epsilon", csv_path)
    iters = _need(cols, "iter", csv_path)
    rres = _need(cols, "rel_residual", csv_path)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    seen = []
    for key in zip(ms, eps):
        if key in seen:
            continue
        seen.append(key)
        pick = (ms == key[0]) & (eps == key[1])
        ax.semilogy(iters[pick], rres[pick],
                    "o-", ms=3, label=f"m={key[0]}, eps={key[1]:g}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative residual")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def plot_energy(csv_paths, out_path, *, labels=None,
                column: str = "F_h") -> None:
    """Overlay one records column vs time from several runs."""
    paths = list(csv_paths)
    if not paths:
        raise ValueError("no input CSVs")
    if labels is not None and len(labels) != len(paths):
        raise ValueError("labels and inputs differ in length")
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for k, path in enumerate(paths):
        cols = read_records_csv(path)
        label = labels[k] if labels else os.path.basename(path)
        ax.plot(_need(cols, "t", path), _need(cols, column, path),
                lw=1, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel(column)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
