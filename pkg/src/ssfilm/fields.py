"""Periodic field containers on a uniform square grid.

The domain is the square (0, L)^2 discretized by m cells per side,
h = L/m. Four sample locations occur:

* cell centers   ((i + 1/2) h, (j + 1/2) h)
* vertices       ((i + 1) h, (j + 1) h), so vertex (i, j) is the
  upper-right corner of cell (i, j)
* east-west edge midpoints   ((i + 1) h, (j + 1/2) h)
* north-south edge midpoints ((i + 1/2) h, (j + 1) h)

Arrays are indexed [i, j] with i the x index and are periodic in both
axes. Fields are value containers: the wrapped (m, m) float64 array is
read-only once built, so fields can be shared freely across threads.

All integrals use the uniform weight h^2. Under periodicity the vertex
and edge inner products, defined through averaging the product back to
cell centers, collapse to the same plain h^2-weighted sum used at cell
centers; the collapsed form is implemented and the equivalence is
exercised in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "CellField",
    "VertexField",
    "EdgeFieldEW",
    "EdgeFieldNS",
    "VertexVectorField",
    "mean",
    "roughness",
    "inner_cell",
    "inner_vertex",
    "inner_edge",
    "norm_p",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic m x m grid on (0, L)^2."""

    m: int
    L: float

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)):
            raise ValueError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "L", float(self.L))
        if self.m < 4 or self.m % 2 != 0:
            # even m keeps the highest Fourier mode of the symbol well defined
            raise ValueError(f"m must be even and >= 4, got {self.m}")
        if not (self.L > 0.0) or not math.isfinite(self.L):
            raise ValueError(f"L must be positive and finite, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.m

    def cell_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays (X, Y) of the cell centers, shape (m, m)."""
        c = (np.arange(self.m) + 0.5) * self.h
        return np.meshgrid(c, c, indexing="ij")


class _GridArray:
    """Shared machinery for the scalar field containers."""

    __slots__ = ("grid", "values")

    location = "cell"

    def __init__(self, grid: GridSpec, values, *, copy: bool = True):
        # copy=False means copy-only-if-needed (ownership transfer)
        arr = np.array(values, dtype=np.float64, copy=True if copy else None,
                       order="C")
        if arr.shape != (grid.m, grid.m):
            raise ValueError(
                f"expected shape {(grid.m, grid.m)}, got {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def at(self, i: int, j: int) -> float:
        """Sample with periodic index wrap; i +- m aliases i."""
        return float(self.values[i % self.grid.m, j % self.grid.m])

    @classmethod
    def zeros(cls, grid: GridSpec):
        return cls(grid, np.zeros((grid.m, grid.m)), copy=False)

    @classmethod
    def full(cls, grid: GridSpec, value: float):
        return cls(grid, np.full((grid.m, grid.m), float(value)), copy=False)

    @classmethod
    def _wrap(cls, grid: GridSpec, values: np.ndarray):
        # internal constructor: takes ownership, skips the defensive copy
        return cls(grid, values, copy=False)

    def __repr__(self) -> str:
        g = self.grid
        return f"{type(self).__name__}(m={g.m}, L={g.L})"


class CellField(_GridArray):
    """Scalar samples at cell centers."""

    location = "cell"


class VertexField(_GridArray):
    """Scalar samples at vertices."""

    location = "vertex"


class EdgeFieldEW(_GridArray):
    """Scalar samples at east-west edge midpoints (x-normal faces)."""

    location = "edge_ew"


class EdgeFieldNS(_GridArray):
    """Scalar samples at north-south edge midpoints (y-normal faces)."""

    location = "edge_ns"


class VertexVectorField:
    """Pair of vertex fields forming a vector (x, y) at each vertex."""

    __slots__ = ("x", "y")

    def __init__(self, x: VertexField, y: VertexField):
        if x.grid != y.grid:
            raise ValueError("components live on different grids")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("VertexVectorField is immutable")

    @property
    def grid(self) -> GridSpec:
        return self.x.grid


def _check_same_grid(u: _GridArray, v: _GridArray) -> None:
    if u.grid != v.grid:
        raise ValueError(f"grid mismatch: {u.grid} vs {v.grid}")


def _check_location(u: _GridArray, expected: str) -> None:
    if u.location != expected:
        raise ValueError(f"expected a {expected} field, got {u.location}")


def mean(u: _GridArray) -> float:
    """Grid average (1/m^2) sum u."""
    return float(u.values.mean())


def roughness(u: _GridArray) -> float:
    """Surface roughness h * rms(u - mean(u)).

    Equals sqrt(h^2/m^2 * sum (u - mean)^2); the two-pass form is exact
    for constant fields.
    """
    d = u.values - u.values.mean()
    return u.grid.h * math.sqrt(float(np.dot(d.ravel(), d.ravel())) / d.size)


def inner_cell(u: CellField, v: CellField) -> float:
    """Discrete L2 pairing h^2 sum u v over cell centers."""
    _check_same_grid(u, v)
    _check_location(u, "cell")
    _check_location(v, "cell")
    return u.grid.h ** 2 * float(np.dot(u.values.ravel(), v.values.ravel()))


def inner_vertex(u: VertexField, v: VertexField) -> float:
    """Vertex pairing, collapsed to h^2 sum u v.

    The defining form averages the product to cell centers with
    quarter weights before summing; periodic wrap makes every vertex
    carry total weight one, so the plain sum is identical.
    """
    _check_same_grid(u, v)
    _check_location(u, "vertex")
    _check_location(v, "vertex")
    return u.grid.h ** 2 * float(np.dot(u.values.ravel(), v.values.ravel()))


def inner_edge(u, v) -> float:
    """Edge pairing for two like-located edge fields, h^2 sum u v."""
    _check_same_grid(u, v)
    if u.location != v.location or u.location not in ("edge_ew", "edge_ns"):
        raise ValueError("operands must be edge fields of the same family")
    return u.grid.h ** 2 * float(np.dot(u.values.ravel(), v.values.ravel()))


def norm_p(u: _GridArray, p: float) -> float:
    """Discrete l^p norm with h^2 weight; p in {2, 4, 6} or inf."""
    a = u.values
    if p == math.inf or p == np.inf:
        return float(np.abs(a).max())
    if p == 2:
        return u.grid.h * math.sqrt(float(np.dot(a.ravel(), a.ravel())))
    if p in (4, 6):
        p = int(p)
        return float((u.grid.h ** 2 * np.sum(np.abs(a) ** p)) ** (1.0 / p))
    raise ValueError(f"unsupported p={p}; use 2, 4, 6 or inf")
