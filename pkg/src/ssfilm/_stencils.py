"""Array-level periodic finite-difference stencils.

Everything here works on plain (m, m) float64 arrays indexed [i, j]
with i the x index; periodic wrap is done with np.roll. The field-typed
wrappers live in operators.py. Conventions:

* cell (i, j) has its upper-right vertex at index (i, j), so a vertex
  quantity at (i, j) involves cells (i, j), (i+1, j), (i, j+1),
  (i+1, j+1), and a cell quantity gathers vertices (i, j), (i-1, j),
  (i, j-1), (i-1, j-1).
"""

from __future__ import annotations

import numpy as np


def lap(a: np.ndarray, h: float) -> np.ndarray:
    """Five-point Laplacian at cell centers."""
    return (
        np.roll(a, -1, 0) + np.roll(a, 1, 0)
        + np.roll(a, -1, 1) + np.roll(a, 1, 1)
        - 4.0 * a
    ) / (h * h)


def bih(a: np.ndarray, h: float) -> np.ndarray:
    """Biharmonic as the composed five-point Laplacian."""
    return lap(lap(a, h), h)


def skew_grad(a: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Vertex-centered gradient averaging the two straddling differences.

    At vertex (i, j): gx = (a[i+1,j+1] - a[i,j+1] + a[i+1,j] - a[i,j]) / 2h
    and symmetrically for gy.
    """
    s1 = np.roll(a, -1, 0)
    s2 = np.roll(a, -1, 1)
    s12 = np.roll(s1, -1, 1)
    gx = (s12 - s2 + s1 - a) / (2.0 * h)
    gy = (s12 - s1 + s2 - a) / (2.0 * h)
    return gx, gy


def skew_div(fx: np.ndarray, fy: np.ndarray, h: float) -> np.ndarray:
    """Cell-centered divergence adjoint (up to sign) to skew_grad."""
    tx1 = np.roll(fx, 1, 0)
    dx = fx - tx1 + np.roll(fx, 1, 1) - np.roll(tx1, 1, 1)
    ty2 = np.roll(fy, 1, 1)
    dy = fy - ty2 + np.roll(fy, 1, 0) - np.roll(ty2, 1, 0)
    return (dx + dy) / (2.0 * h)


def skew_lap(a: np.ndarray, h: float) -> np.ndarray:
    """Diagonal-neighbor Laplacian, the composition skew_div(skew_grad)."""
    s1 = np.roll(a, -1, 0)
    s1m = np.roll(a, 1, 0)
    return (
        np.roll(s1, -1, 1) + np.roll(s1, 1, 1)
        + np.roll(s1m, -1, 1) + np.roll(s1m, 1, 1)
        - 4.0 * a
    ) / (2.0 * h * h)


def plap4(a: np.ndarray, h: float) -> np.ndarray:
    """4-Laplacian div(|grad a|^2 grad a) built on the skew stencils."""
    gx, gy = skew_grad(a, h)
    r = gx * gx + gy * gy
    return skew_div(r * gx, r * gy, h)


def v2c(a: np.ndarray) -> np.ndarray:
    """Quarter-weighted average of the four vertices around each cell."""
    t1 = np.roll(a, 1, 0)
    return 0.25 * (a + t1 + np.roll(a, 1, 1) + np.roll(t1, 1, 1))


def edge_grad(a: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Standard one-sided differences to edge midpoints.

    ew[i, j] = (a[i+1, j] - a[i, j]) / h lives on the east face of cell
    (i, j); ns is the analogous y difference on the north face.
    """
    ew = (np.roll(a, -1, 0) - a) / h
    ns = (np.roll(a, -1, 1) - a) / h
    return ew, ns
