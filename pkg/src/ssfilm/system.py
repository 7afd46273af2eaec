"""Energy functional and the implicit system of one BDF2 step.

The evolution is the slope-selection thin-film flow

    d phi/dt = div(|grad phi|^2 grad phi) - lap phi - eps^2 lap^2 phi,

the gradient flow of F(phi) = integral of (1/4)(|grad phi|^2 - 1)^2
+ (eps^2/2)(lap phi)^2. Discretely,

    F_h(phi) = 1/4 ||G phi||_4^4 - 1/2 ||G phi||_2^2
               + eps^2/2 ||lap_h phi||_2^2,

with G the vertex (skew) gradient. One BDF2 step of size s with
stabilization A lap_h^2 applied to the increment leaves the implicit
system N(phi) = f, where

    N(phi) = (3/2) phi - s div(|G phi|^2 G phi)
             + (A s^2 + s eps^2) lap_h^2 phi,
    f      = (4 phi^k - phi^{k-1}) / 2
             - s lap_skew (2 phi^k - phi^{k-1})
             + A s^2 lap_h^2 phi^k.

N is the gradient of the strictly convex objective

    E(phi) = c0/2 ||phi||_2^2 + c1/4 ||G phi||_4^4
             + c2/2 ||lap_h phi||_2^2 - <f, phi>,

with (c0, c1, c2) = (3/2, s, A s^2 + s eps^2); the same machinery with
(1, s, s eps^2) serves the convex-split backward-Euler bootstrap step.
Along a direction d the derivative of E(phi + alpha d) is a cubic

    q(alpha) = a0 + a1 alpha + a2 alpha^2 + a3 alpha^3

with q' > 0, so exact line minimization is the unique root of q.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _stencils
from .fields import CellField, GridSpec, inner_cell

__all__ = [
    "SchemeParams",
    "ImplicitSystem",
    "energy",
    "modified_energy",
    "apply_N",
    "assemble_rhs",
    "residual",
    "objective",
    "line_coeffs",
]

A_MIN = 1.0 / 16.0


@dataclass(frozen=True)
class SchemeParams:
    """Time step s, regularization eps, and stabilization weight A.

    A >= 1/16 is required by the energy-decay theorem; smaller values
    are allowed only with allow_unstable_A=True and emit a warning.
    """

    epsilon: float
    s: float
    A: float = A_MIN
    allow_unstable_A: bool = False

    def __post_init__(self) -> None:
        if not (self.epsilon > 0.0) or not math.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.s > 0.0) or not math.isfinite(self.s):
            raise ValueError(f"time step s must be positive, got {self.s}")
        if self.A < A_MIN:
            if not self.allow_unstable_A:
                raise ValueError(
                    f"A={self.A} is below the stability threshold 1/16; "
                    "pass allow_unstable_A=True to override"
                )
            warnings.warn(
                f"A={self.A} < 1/16: unconditional energy decay is not "
                "guaranteed",
                stacklevel=2,
            )

    def bdf2_coeffs(self) -> tuple[float, float, float]:
        """(identity, 4-Laplacian, biharmonic) weights of the BDF2 system."""
        return 1.5, self.s, self.A * self.s ** 2 + self.s * self.epsilon ** 2

    def bootstrap_coeffs(self) -> tuple[float, float, float]:
        """Weights of the convex-split backward-Euler first step."""
        return 1.0, self.s, self.s * self.epsilon ** 2


@dataclass(frozen=True)
class ImplicitSystem:
    """One nonlinear system N(phi) = f with frozen right-hand side."""

    f: CellField
    c_id: float
    c_plap: float
    c_bih: float
    params: SchemeParams | None = None

    @property
    def grid(self) -> GridSpec:
        return self.f.grid

    @property
    def coeffs(self) -> tuple[float, float, float]:
        return self.c_id, self.c_plap, self.c_bih

    @classmethod
    def bdf2(cls, params: SchemeParams, f: CellField) -> "ImplicitSystem":
        c0, c1, c2 = params.bdf2_coeffs()
        return cls(f=f, c_id=c0, c_plap=c1, c_bih=c2, params=params)

    @classmethod
    def backward_euler(
        cls, params: SchemeParams, f: CellField
    ) -> "ImplicitSystem":
        c0, c1, c2 = params.bootstrap_coeffs()
        return cls(f=f, c_id=c0, c_plap=c1, c_bih=c2, params=params)


def apply_system_arrays(
    phi: np.ndarray, c0: float, c1: float, c2: float, h: float
) -> np.ndarray:
    """c0 phi - c1 plap4(phi) + c2 bih(phi) on raw arrays."""
    return (
        c0 * phi
        - c1 * _stencils.plap4(phi, h)
        + c2 * _stencils.bih(phi, h)
    )


def energy(phi: CellField, params: SchemeParams) -> float:
    """Discrete free energy F_h(phi)."""
    h = phi.grid.h
    gx, gy = _stencils.skew_grad(phi.values, h)
    mag2 = gx * gx + gy * gy
    e4 = h * h * float(np.sum(mag2 * mag2))
    e2 = h * h * float(mag2.sum())
    lap = _stencils.lap(phi.values, h)
    l2 = h * h * float(np.dot(lap.ravel(), lap.ravel()))
    return 0.25 * e4 - 0.5 * e2 + 0.5 * params.epsilon ** 2 * l2


def modified_energy(
    phi: CellField, psi: CellField, params: SchemeParams
) -> float:
    """F_h(phi) + (1/4s)||phi - psi||_2^2 + 1/2 ||grad_h(phi - psi)||_2^2.

    The BDF2 Lyapunov functional: non-increasing along steps whenever
    A >= 1/16, regardless of s.
    """
    if phi.grid != psi.grid:
        raise ValueError("phi and psi live on different grids")
    h = phi.grid.h
    d = phi.values - psi.values
    l2sq = h * h * float(np.dot(d.ravel(), d.ravel()))
    ew, ns = _stencils.edge_grad(d, h)
    gsq = h * h * (
        float(np.dot(ew.ravel(), ew.ravel()))
        + float(np.dot(ns.ravel(), ns.ravel()))
    )
    return energy(phi, params) + l2sq / (4.0 * params.s) + 0.5 * gsq


def apply_N(phi: CellField, params: SchemeParams) -> CellField:
    """Nonlinear operator of the BDF2 implicit system."""
    c0, c1, c2 = params.bdf2_coeffs()
    out = apply_system_arrays(phi.values, c0, c1, c2, phi.grid.h)
    return CellField._wrap(phi.grid, out)


def assemble_rhs(
    phi_k: CellField, phi_km1: CellField, params: SchemeParams
) -> CellField:
    """Right-hand side of the BDF2 system from the two-step history."""
    if phi_k.grid != phi_km1.grid:
        raise ValueError("history fields live on different grids")
    h = phi_k.grid.h
    s = params.s
    extrap = 2.0 * phi_k.values - phi_km1.values
    f = (
        0.5 * (4.0 * phi_k.values - phi_km1.values)
        - s * _stencils.skew_lap(extrap, h)
        + params.A * s * s * _stencils.bih(phi_k.values, h)
    )
    return CellField._wrap(phi_k.grid, f)


def residual(phi: CellField, sys: ImplicitSystem) -> CellField:
    """f - N(phi)."""
    c0, c1, c2 = sys.coeffs
    out = sys.f.values - apply_system_arrays(
        phi.values, c0, c1, c2, phi.grid.h
    )
    return CellField._wrap(phi.grid, out)


def objective(phi: CellField, sys: ImplicitSystem) -> float:
    """Strictly convex functional whose gradient is N(phi) - f."""
    c0, c1, c2 = sys.coeffs
    h = phi.grid.h
    a = phi.values
    gx, gy = _stencils.skew_grad(a, h)
    mag2 = gx * gx + gy * gy
    e4 = h * h * float(np.sum(mag2 * mag2))
    lap = _stencils.lap(a, h)
    lap2 = h * h * float(np.dot(lap.ravel(), lap.ravel()))
    phi2 = h * h * float(np.dot(a.ravel(), a.ravel()))
    return (
        0.5 * c0 * phi2
        + 0.25 * c1 * e4
        + 0.5 * c2 * lap2
        - inner_cell(sys.f, phi)
    )


def line_coeffs(
    phi: CellField, d: CellField, sys: ImplicitSystem
) -> tuple[float, float, float, float]:
    """Cubic coefficients of d/dalpha objective(phi + alpha d).

    With g = G phi and e = G d at vertices:

        a0 = <N phi - f, d>
        a1 = c0 ||d||_2^2 + c1 (<|g|^2 |e|^2> + 2 <(g.e)^2>)
             + c2 ||lap d||_2^2
        a2 = 3 c1 <(g.e) |e|^2>
        a3 = c1 ||e||_4^4

    where <.> is the h^2-weighted vertex sum.
    """
    if phi.grid != d.grid or phi.grid != sys.grid:
        raise ValueError("phi, d, and system must share one grid")
    c0, c1, c2 = sys.coeffs
    h = phi.grid.h
    h2 = h * h
    gx, gy = _stencils.skew_grad(phi.values, h)
    ex, ey = _stencils.skew_grad(d.values, h)
    g2 = gx * gx + gy * gy
    e2 = ex * ex + ey * ey
    ge = gx * ex + gy * ey

    nphi = apply_system_arrays(phi.values, c0, c1, c2, h)
    a0 = h2 * float(np.dot((nphi - sys.f.values).ravel(), d.values.ravel()))

    lapd = _stencils.lap(d.values, h)
    a1 = (
        c0 * h2 * float(np.dot(d.values.ravel(), d.values.ravel()))
        + c1 * h2 * (float(np.sum(g2 * e2)) + 2.0 * float(np.sum(ge * ge)))
        + c2 * h2 * float(np.dot(lapd.ravel(), lapd.ravel()))
    )
    a2 = 3.0 * c1 * h2 * float(np.sum(ge * e2))
    a3 = c1 * h2 * float(np.sum(e2 * e2))
    return a0, a1, a2, a3
