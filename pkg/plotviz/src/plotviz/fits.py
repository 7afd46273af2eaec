"""Power-law fit on a time window.

This duplicates the simulator's CSV fit operation by operation (same
masking, same polyfit call on the same float64 data), so a fit printed
here agrees with one computed there to the last bit. The agreement is
pinned by tests; change this only together with the simulator.
"""

from __future__ import annotations

import numpy as np

__all__ = ["loglog_fit"]


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
