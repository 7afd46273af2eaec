"""Constant-coefficient preconditioner diagonalized by the FFT.

The linearized-at-zero part of the implicit operator,

    L psi = c0 psi - c1 lap_h psi + c2 lap_h^2 psi,

is translation invariant, so the periodic eigenvalues are

    lambda(l, q) = c0 - c1 sigma + c2 sigma^2,
    sigma(l, q)  = -(4/h^2) (sin^2(pi l / m) + sin^2(pi q / m)),

for mode indices l, q in 0..m-1. Since sigma <= 0 and c1, c2 >= 0,
lambda >= c0 everywhere with equality exactly at the mean mode (0, 0):
the table is safe to divide by. solve_L is therefore an exact inverse
of apply_L up to rounding, one forward and one inverse real FFT.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _stencils
from .fields import CellField, GridSpec
from .system import SchemeParams

__all__ = ["PrecondSymbol", "build_symbol", "apply_L", "solve_L"]


@dataclass(frozen=True)
class PrecondSymbol:
    """Eigenvalue table of L on an m x m periodic grid."""

    grid: GridSpec
    c_id: float
    c_lap: float
    c_bih: float
    lam: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.lam.setflags(write=False)
        # half-spectrum view matching rfft2 layout, cached once
        half = np.ascontiguousarray(self.lam[:, : self.grid.m // 2 + 1])
        object.__setattr__(self, "_lam_half", half)


def build_symbol_weights(
    grid: GridSpec, c_id: float, c_lap: float, c_bih: float
) -> PrecondSymbol:
    """Symbol table for c_id - c_lap * lap + c_bih * lap^2."""
    m = grid.m
    h = grid.h
    sin2 = np.sin(np.pi * np.arange(m) / m) ** 2
    sigma = -(4.0 / (h * h)) * (sin2[:, None] + sin2[None, :])
    lam = c_id - c_lap * sigma + c_bih * sigma * sigma
    return PrecondSymbol(grid=grid, c_id=c_id, c_lap=c_lap, c_bih=c_bih,
                         lam=lam)


def build_symbol(grid: GridSpec, params: SchemeParams) -> PrecondSymbol:
    """Symbol of the BDF2 preconditioner (3/2, s, A s^2 + s eps^2)."""
    c0, c1, c2 = params.bdf2_coeffs()
    return build_symbol_weights(grid, c0, c1, c2)


def apply_L(psi: CellField, params: SchemeParams) -> CellField:
    """Physical-space application of the BDF2 preconditioner."""
    c0, c1, c2 = params.bdf2_coeffs()
    h = psi.grid.h
    a = psi.values
    out = c0 * a - c1 * _stencils.lap(a, h) + c2 * _stencils.bih(a, h)
    return CellField._wrap(psi.grid, out)


def solve_L_arrays(r: np.ndarray, symbol: PrecondSymbol) -> np.ndarray:
    """Exact FFT solve of L d = r on raw arrays."""
    m = symbol.grid.m
    rhat = np.fft.rfft2(r)
    rhat /= symbol._lam_half
    return np.fft.irfft2(rhat, s=(m, m))


def solve_L(r: CellField, symbol: PrecondSymbol) -> CellField:
    """Solve L d = r; exact inverse of apply_L up to rounding.

    The output is real by construction (half-spectrum transform), and
    its mean is mean(r) / c_id since lambda(0, 0) = c_id.
    """
    if r.grid != symbol.grid:
        raise ValueError("field and symbol grids differ")
    return CellField._wrap(r.grid, solve_L_arrays(r.values, symbol))
