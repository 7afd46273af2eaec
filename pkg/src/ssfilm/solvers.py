"""Preconditioned descent solvers for the implicit step system.

The implicit system N(phi) = f is the gradient of a strictly convex
objective, so it is solved by line-minimizing descent methods
preconditioned with the constant-coefficient operator L (see precond):

* psd    steepest descent, d = -Linv(grad)
* pncg1  nonlinear CG with beta = max(0, beta_PR)
* pncg2  nonlinear CG with beta = max(0, min(beta_FR, beta_PR))

where grad = N(phi) - f = -r, gbar = Linv(grad), and

    beta_FR = <gbar+, gbar+> / <gbar, gbar>,
    beta_PR = <gbar+, gbar+ - gbar> / <gbar, gbar>,

inner products taken as the plain h^2-weighted cell pairing. The
conventional preconditioned pairing <grad, gbar> is available behind
beta_pairing="residual". If a combined direction fails the descent
test <d, r> > 0 the iteration restarts from -gbar (beta forced to 0);
restarts are counted in the stats and do not fire on the reference
problems at default tolerances.

Line minimization along d is exact: the directional derivative is a
cubic q(alpha) with q' > 0 (see system.line_coeffs), solved to machine
precision by safeguarded Newton, or by a secant iteration when
configured. Termination: ||f - N(phi)||_2 <= rel_tol ||f||_2 + abs_tol.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .fields import CellField
from .precond import PrecondSymbol, solve_L_arrays
from .system import ImplicitSystem

__all__ = [
    "SolverConfig",
    "SolveStats",
    "SolverError",
    "line_search",
    "solve",
]

_KINDS = ("psd", "pncg1", "pncg2")
_LINE_SEARCHES = ("exact_cubic", "secant")
_PAIRINGS = ("gbar", "residual")


class SolverError(RuntimeError):
    """Solver diverged or produced non-finite iterates."""


@dataclass(frozen=True)
class SolverConfig:
    kind: str = "psd"
    rel_tol: float = 1e-9
    abs_tol: float = 1e-13
    max_iter: int = 500
    line_search: str = "exact_cubic"
    secant_tol: float = 1e-12
    secant_max: int = 50
    beta_pairing: str = "gbar"

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", self.kind.lower())
        if self.kind not in _KINDS:
            raise ValueError(f"unknown solver kind {self.kind!r}; "
                             f"choose from {_KINDS}")
        if self.line_search not in _LINE_SEARCHES:
            raise ValueError(f"unknown line_search {self.line_search!r}")
        if self.beta_pairing not in _PAIRINGS:
            raise ValueError(f"unknown beta_pairing {self.beta_pairing!r}")
        if self.rel_tol < 0 or self.abs_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolveStats:
    iterations: int
    converged: bool
    final_rel_residual: float
    residual_history: list[float] = field(default_factory=list)
    alphas: list[float] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)
    restarts: int = 0


def _cubic(c, x: float) -> float:
    a0, a1, a2, a3 = c
    return a0 + x * (a1 + x * (a2 + x * a3))


def _cubic_deriv(c, x: float) -> float:
    _, a1, a2, a3 = c
    return a1 + x * (2.0 * a2 + 3.0 * a3 * x)


def _exact_root(c) -> float:
    a0, a1, a2, a3 = c
    if a2 == 0.0 and a3 == 0.0:
        # linear case, e.g. directions with vanishing vertex gradient
        if a1 <= 0.0:
            raise ValueError("line-search cubic is not increasing")
        return -a0 / a1

    # bracket the unique root of the increasing cubic
    x = -a0 / a1 if a1 > 0.0 else 0.0
    step = 1.0 + abs(x)
    lo = hi = x
    for _ in range(200):
        q = _cubic(c, x)
        if q == 0.0:
            break
        if q > 0.0:
            hi = x
            x -= step
            if _cubic(c, x) <= 0.0:
                lo = x
                break
        else:
            lo = x
            x += step
            if _cubic(c, x) >= 0.0:
                hi = x
                break
        step *= 2.0
    else:
        raise ValueError(f"failed to bracket line-search root for {c}")

    if lo != hi:
        x = 0.5 * (lo + hi)
        for _ in range(200):
            q = _cubic(c, x)
            if q > 0.0:
                hi = x
            elif q < 0.0:
                lo = x
            else:
                break
            dq = _cubic_deriv(c, x)
            xn = x - q / dq if dq > 0.0 else 0.5 * (lo + hi)
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
            if abs(xn - x) <= 1e-17 * (1.0 + abs(xn)):
                x = xn
                break
            x = xn

    if _cubic_deriv(c, x) <= 0.0:
        raise ValueError("line-search cubic is not increasing at its root")
    return x


def _secant_root(c, tol: float, max_iter: int) -> float:
    # Convergence is judged on the bracket width relative to the iterate,
    # never on |q| against an absolute threshold: near an outer-solver
    # fixed point all four coefficients shrink together, so |q(0)| can
    # sit below any fixed threshold while the root itself stays O(1).
    a0, a1, a3 = c[0], c[1], c[3]
    if a0 == 0.0:
        return 0.0
    # Seed from whichever single-term balance is nearest 0: |a0/a1| alone
    # overshoots by orders of magnitude when the cubic term carries the
    # root, and Illinois needs one iteration per factor of 2 to recover.
    balances = []
    if a1 > 0.0:
        balances.append(abs(a0) / a1)
    if a3 > 0.0:
        balances.append(abs(a0 / a3) ** (1.0 / 3.0))
    seed = math.copysign(min(balances), -a0) if balances else math.copysign(
        1e-3, -a0)
    # March away from 0 until the sign of q flips; q increases, so the
    # root sits on the side of 0 opposite to the sign of q(0) = a0.
    xa, qa = 0.0, a0
    x = seed if seed * a0 < 0.0 else math.copysign(1e-3, -a0)
    xb = qb = None
    for _ in range(200):
        q = _cubic(c, x)
        if q == 0.0:
            return x
        if (q > 0.0) != (a0 > 0.0):
            xb, qb = x, q
            break
        xa, qa = x, q
        x *= 2.0
    if xb is None:
        warnings.warn(
            "secant line search found no sign change; returning best iterate",
            stacklevel=2,
        )
        return xa
    # Secant steps between the bracket endpoints; when the same endpoint
    # is replaced twice running, halve the stale side's q (Illinois rule)
    # so the bracket keeps contracting instead of stagnating one-sided.
    side = 0
    best_x, best_q = xa, abs(qa)
    for _ in range(max_iter):
        x2 = xb - qb * (xb - xa) / (qb - qa)
        q2 = _cubic(c, x2)
        if abs(q2) < best_q:
            best_x, best_q = x2, abs(q2)
        if q2 == 0.0 or abs(xb - xa) <= tol * (1.0 + abs(x2)):
            return x2
        if (q2 > 0.0) == (qa > 0.0):
            xa, qa = x2, q2
            if side == -1:
                qb *= 0.5
            side = -1
        else:
            xb, qb = x2, q2
            if side == 1:
                qa *= 0.5
            side = 1
    warnings.warn(
        "secant line search missed its tolerance; returning best iterate",
        stacklevel=2,
    )
    return best_x


def _combine_beta(
    kind: str, ip_new: float, ip_prev: float, cross: float
) -> float:
    """Nonnegative CG weight from the pairing values.

    With gbar+ = gbar both variants return 0 (beta_PR vanishes), so a
    stalled preconditioned gradient falls back to steepest descent.
    """
    beta_fr = ip_new / ip_prev
    beta_pr = (ip_new - cross) / ip_prev
    if kind == "pncg1":
        return max(0.0, beta_pr)
    return max(0.0, min(beta_fr, beta_pr))


def line_search(
    coeffs: tuple[float, float, float, float], config: SolverConfig
) -> float:
    """Root of the increasing cubic q(alpha) = a0 + a1 a + a2 a^2 + a3 a^3.

    The root is the exact minimizer of the convex objective along the
    search direction. A zero direction (all coefficients zero) is
    invalid.
    """
    c = tuple(float(v) for v in coeffs)
    if not all(math.isfinite(v) for v in c):
        raise ValueError(f"non-finite line-search coefficients {c}")
    if c == (0.0, 0.0, 0.0, 0.0):
        raise ValueError("line search along a zero direction")
    if config.line_search == "secant":
        return _secant_root(c, config.secant_tol, config.secant_max)
    return _exact_root(c)


def solve(
    sys: ImplicitSystem,
    phi_init: CellField,
    symbol: PrecondSymbol,
    config: SolverConfig = SolverConfig(),
) -> tuple[CellField, SolveStats]:
    """Minimize the step objective from phi_init until the residual test.

    Returns the final iterate and per-iteration statistics. Residual
    history has one entry per visited iterate (iterations + 1 values,
    all positive until convergence); NaN or Inf anywhere aborts with
    SolverError. On hitting max_iter the best iterate is returned with
    converged=False.
    """
    grid = sys.grid
    if phi_init.grid != grid or symbol.grid != grid:
        raise ValueError("system, initial iterate, and symbol grids differ")
    c0, c1, c2 = sys.coeffs
    h = grid.h
    h2 = h * h
    f = sys.f.values
    fnorm = h * math.sqrt(float(np.dot(f.ravel(), f.ravel())))
    target = config.rel_tol * fnorm + config.abs_tol

    phi = phi_init.values.copy()
    nphi, gx, gy = _kernels.apply_system(phi, c0, c1, c2, h)
    r = f - nphi
    rnorm = h * math.sqrt(float(np.dot(r.ravel(), r.ravel())))
    if not math.isfinite(rnorm):
        raise SolverError("non-finite residual at the initial iterate")

    history = [rnorm]
    alphas: list[float] = []
    betas: list[float] = []
    restarts = 0
    ncg = config.kind != "psd"
    pair_residual = config.beta_pairing == "residual"

    d = None
    gbar_prev = None
    ip_prev = 0.0
    iterations = 0
    while rnorm > target and iterations < config.max_iter:
        gbar = solve_L_arrays(-r, symbol)
        beta = 0.0
        if not ncg or d is None:
            if pair_residual:
                ip_prev = -h2 * float(np.dot(r.ravel(), gbar.ravel()))
            else:
                ip_prev = h2 * float(np.dot(gbar.ravel(), gbar.ravel()))
            d = -gbar
        else:
            if pair_residual:
                ip_new = -h2 * float(np.dot(r.ravel(), gbar.ravel()))
                cross = -h2 * float(np.dot(r.ravel(), gbar_prev.ravel()))
            else:
                ip_new = h2 * float(np.dot(gbar.ravel(), gbar.ravel()))
                cross = h2 * float(np.dot(gbar.ravel(), gbar_prev.ravel()))
            beta = _combine_beta(config.kind, ip_new, ip_prev, cross)
            d = -gbar + beta * d
            if h2 * float(np.dot(d.ravel(), r.ravel())) <= 0.0:
                d = -gbar
                beta = 0.0
                restarts += 1
            ip_prev = ip_new
        gbar_prev = gbar

        a0 = -h2 * float(np.dot(r.ravel(), d.ravel()))
        s_g2e2, s_gesq, s_gee2, s_e4 = _kernels.line_pass(gx, gy, d, h)
        a1 = (
            c0 * h2 * float(np.dot(d.ravel(), d.ravel()))
            + c1 * h2 * (s_g2e2 + 2.0 * s_gesq)
            + c2 * h2 * _kernels.lap_sumsq(d, h)
        )
        a2 = 3.0 * c1 * h2 * s_gee2
        a3 = c1 * h2 * s_e4
        alpha = line_search((a0, a1, a2, a3), config)

        phi = phi + alpha * d
        nphi, gx, gy = _kernels.apply_system(phi, c0, c1, c2, h)
        r = f - nphi
        rnorm = h * math.sqrt(float(np.dot(r.ravel(), r.ravel())))
        if not math.isfinite(rnorm):
            raise SolverError(
                f"non-finite residual after iteration {iterations + 1}"
            )
        history.append(rnorm)
        alphas.append(alpha)
        betas.append(beta)
        iterations += 1

    if fnorm > 0.0:
        final_rel = rnorm / fnorm
    else:
        final_rel = 0.0 if rnorm == 0.0 else math.inf
    stats = SolveStats(
        iterations=iterations,
        converged=rnorm <= target,
        final_rel_residual=final_rel,
        residual_history=history,
        alphas=alphas,
        betas=betas,
        restarts=restarts,
    )
    return CellField._wrap(grid, phi), stats
