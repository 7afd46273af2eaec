"""Initial data, coarsening statistics, and grid-refinement studies.

The two stock initial conditions are the deterministic two-mode
profile used for refinement studies (tuned to the 3.2 x 3.2 box) and
seeded uniform noise of amplitude 0.05 for coarsening runs; both are
centered to mean zero.

Scaling fits use natural-log least squares on a time window, default
[10, min(T, 3000)]. Refinement (Cauchy) studies compare runs on m and
2m grids through a prolongation operator: nearest-neighbor block
injection (the op default, exact partner of 2x2-average restriction)
or periodic bilinear interpolation, which is the default for error
tables since injection's O(h) interpolation error would mask the
second-order gap between solutions.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .fields import CellField, GridSpec, norm_p, roughness
from .solvers import SolverConfig
from .stepping import StepRecord, run
from .system import SchemeParams

__all__ = [
    "sinusoidal_profile",
    "init_sinusoidal",
    "init_from_uniform",
    "init_random",
    "roughness",
    "loglog_fit",
    "prolong",
    "restrict",
    "cauchy_difference",
    "CauchyLevel",
    "CauchyPair",
    "cauchy_table",
    "write_records_csv",
    "read_records_csv",
]

RECORD_COLUMNS = ("t", "F_h", "F_tilde", "mass", "roughness", "iters",
                  "wall_ms")


def sinusoidal_profile(x, y, L: float):
    """Two-mode profile before centering; vanishes at (0.8, 0.8) for L=3.2."""
    return 0.1 * np.sin(2.0 * np.pi * x / L) ** 2 * np.sin(
        4.0 * np.pi * (y - 1.4) / L
    ) - 0.1 * np.cos(2.0 * np.pi * (x - 2.0) / L) * np.sin(
        2.0 * np.pi * y / L
    )


def init_sinusoidal(grid: GridSpec) -> CellField:
    """Deterministic smooth initial data, centered to mean zero."""
    if grid.L != 3.2:
        warnings.warn(
            f"sinusoidal profile is tuned to L=3.2, got L={grid.L}",
            stacklevel=2,
        )
    X, Y = grid.cell_xy()
    u = sinusoidal_profile(X, Y, grid.L)
    return CellField._wrap(grid, u - u.mean())


def init_from_uniform(grid: GridSpec, r: np.ndarray) -> CellField:
    """Map uniform [0,1) samples to centered noise 0.05 (2r - 1)."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (grid.m, grid.m):
        raise ValueError(f"expected shape {(grid.m, grid.m)}, got {r.shape}")
    u = 0.05 * (2.0 * r - 1.0)
    return CellField._wrap(grid, u - u.mean())


def init_random(grid: GridSpec, seed: int) -> CellField:
    """Seeded uniform noise in [-0.05, 0.05), centered to mean zero."""
    rng = np.random.default_rng(seed)
    return init_from_uniform(grid, rng.random((grid.m, grid.m)))


def loglog_fit(t, y, window: tuple[float, float] | None = None
               ) -> tuple[float, float]:
    """Least-squares fit ln y = a + b ln t over a time window.

    Returns (a, b). Default window is [10, min(max(t), 3000)]. Raises
    ValueError when fewer than three samples fall in the window or any
    windowed sample is non-positive.
    """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if t.ndim != 1 or t.shape != y.shape:
        raise ValueError("t and y must be 1-D arrays of equal length")
    if window is None:
        t_hi = float(t.max()) if t.size else 0.0
        window = (10.0, min(t_hi, 3000.0))
    t_min, t_max = window
    mask = (t >= t_min) & (t <= t_max)
    n = int(mask.sum())
    if n < 3:
        raise ValueError(
            f"only {n} samples in window [{t_min}, {t_max}]; need >= 3"
        )
    ts = t[mask]
    ys = y[mask]
    if np.any(ts <= 0.0) or np.any(ys <= 0.0):
        raise ValueError("log-log fit requires positive samples")
    b, a = np.polyfit(np.log(ts), np.log(ys), 1)
    return float(a), float(b)


def _refine_bilinear_axis(a: np.ndarray, axis: int) -> np.ndarray:
    # fine sample 2I sits a quarter cell left of coarse center I,
    # 2I+1 a quarter cell right: weights (3/4, 1/4) toward the neighbor
    left = np.roll(a, 1, axis)
    right = np.roll(a, -1, axis)
    even = 0.75 * a + 0.25 * left
    odd = 0.75 * a + 0.25 * right
    shape = list(a.shape)
    shape[axis] *= 2
    out = np.empty(shape, dtype=a.dtype)
    if axis == 0:
        out[0::2, :] = even
        out[1::2, :] = odd
    else:
        out[:, 0::2] = even
        out[:, 1::2] = odd
    return out


def prolong(phi_c: CellField, method: str = "nearest") -> CellField:
    """Coarse-to-fine transfer onto the doubled grid.

    "nearest" copies each coarse cell to its 2x2 children (mean
    preserving, exact inverse of restrict). "bilinear" interpolates
    from the four nearest coarse centers with periodic wrap (also mean
    preserving, second-order accurate).
    """
    grid_f = GridSpec(2 * phi_c.grid.m, phi_c.grid.L)
    if method == "nearest":
        fine = np.kron(phi_c.values, np.ones((2, 2)))
    elif method == "bilinear":
        fine = _refine_bilinear_axis(
            _refine_bilinear_axis(phi_c.values, 0), 1
        )
    else:
        raise ValueError(f"unknown prolongation method {method!r}")
    return CellField._wrap(grid_f, fine)


def restrict(phi_f: CellField) -> CellField:
    """Fine-to-coarse transfer by 2x2 block averaging."""
    m = phi_f.grid.m
    if m % 4 != 0:
        raise ValueError(f"cannot halve m={m} and stay a valid grid")
    grid_c = GridSpec(m // 2, phi_f.grid.L)
    coarse = phi_f.values.reshape(m // 2, 2, m // 2, 2).mean(axis=(1, 3))
    return CellField._wrap(grid_c, coarse)


def cauchy_difference(
    phi_f: CellField, phi_c: CellField, method: str = "bilinear"
) -> float:
    """||phi_f - prolong(phi_c)||_2 on the fine grid."""
    if phi_f.grid.m != 2 * phi_c.grid.m or phi_f.grid.L != phi_c.grid.L:
        raise ValueError("fields are not a coarse/fine pair")
    diff = phi_f.values - prolong(phi_c, method=method).values
    return norm_p(CellField._wrap(phi_f.grid, diff), 2)


@dataclass(frozen=True)
class CauchyLevel:
    m: int
    h: float
    s: float
    steps: int
    avg_iters: float
    wall_s: float
    phi: CellField


@dataclass(frozen=True)
class CauchyPair:
    m_coarse: int
    m_fine: int
    h_coarse: float
    h_fine: float
    error: float
    rate: float | None


def cauchy_table(
    levels=(32, 64, 128, 256),
    *,
    L: float = 3.2,
    epsilon: float = 0.1,
    A: float = 1.0 / 16.0,
    T: float = 0.32,
    cfl: float = 0.01,
    solver: SolverConfig = SolverConfig(),
    interp: str = "bilinear",
    guard: str = "raise",
    warm_start: str = "extrapolated",
) -> tuple[list[CauchyLevel], list[CauchyPair]]:
    """Refinement study: evolve each level with s = cfl * h to time T.

    Consecutive levels must double m. Errors compare the finer run
    against the prolonged coarser run at T; the rate between pair p-1
    and pair p is log2(error_{p-1} / error_p).
    """
    levels = tuple(int(m) for m in levels)
    if len(levels) < 2:
        raise ValueError("need at least two levels")
    for mc, mf in zip(levels, levels[1:]):
        if mf != 2 * mc:
            raise ValueError(f"levels must double: {mc} -> {mf}")

    results: list[CauchyLevel] = []
    for m in levels:
        grid = GridSpec(m, L)
        params = SchemeParams(epsilon=epsilon, s=cfl * grid.h, A=A)
        phi0 = init_sinusoidal(grid)
        final = {}

        def keep(record, state, _sink=final):
            _sink["state"] = state

        start = time.perf_counter()
        records = run(phi0, params, solver, T, observers=(keep,),
                      guard=guard, warm_start=warm_start)
        wall = time.perf_counter() - start
        avg_iters = sum(r.iters for r in records) / len(records)
        results.append(
            CauchyLevel(
                m=m,
                h=grid.h,
                s=params.s,
                steps=len(records),
                avg_iters=avg_iters,
                wall_s=wall,
                phi=final["state"].phi_curr,
            )
        )

    pairs: list[CauchyPair] = []
    prev_err = None
    for coarse, fine in zip(results, results[1:]):
        err = cauchy_difference(fine.phi, coarse.phi, method=interp)
        rate = None if prev_err is None else math.log2(prev_err / err)
        pairs.append(
            CauchyPair(
                m_coarse=coarse.m,
                m_fine=fine.m,
                h_coarse=coarse.h,
                h_fine=fine.h,
                error=err,
                rate=rate,
            )
        )
        prev_err = err
    return results, pairs


def write_records_csv(path, records: list[StepRecord],
                      provenance: list[str] = ()) -> None:
    """Write step records with commented provenance lines on top.

    Floats are written with repr (shortest round trip), so identical
    runs produce identical bytes except for the wall_ms column.
    """
    with open(path, "w") as fh:
        for line in provenance:
            fh.write(f"# {line}\n")
        fh.write(",".join(RECORD_COLUMNS) + "\n")
        for r in records:
            fh.write(
                f"{r.t!r},{r.F_h!r},{r.F_tilde!r},{r.mass!r},"
                f"{r.roughness!r},{r.iters},{r.wall_ms!r}\n"
            )


def read_records_csv(path) -> dict[str, np.ndarray]:
    """Read a records CSV back as column arrays, skipping # comments."""
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"no data in {path}")
    header = [c.strip() for c in lines[0].strip().split(",")]
    data = np.array(
        [[float(v) for v in ln.strip().split(",")] for ln in lines[1:]]
    )
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError(f"ragged records CSV {path}")
    return {name: data[:, k] for k, name in enumerate(header)}
