"""Periodic 5-point Laplacian, duplicated from the simulator.

The snapshot format stays minimal by not exporting derived fields, so
the Laplacian shown in contour plots is recomputed here with the same
stencil the simulator uses. tests/data in the simulator package holds
a snapshot and its Laplacian as the shared pin; both packages check
against those files.
"""

from __future__ import annotations

import numpy as np

__all__ = ["laplacian_5pt"]


def laplacian_5pt(a: np.ndarray, h: float) -> np.ndarray:
    """Five-point Laplacian with periodic wrap, spacing h."""
    return (
        np.roll(a, -1, 0) + np.roll(a, 1, 0)
        + np.roll(a, -1, 1) + np.roll(a, 1, 1)
        - 4.0 * a
    ) / (h * h)
