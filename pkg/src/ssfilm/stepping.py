"""BDF2 time stepping with an energy-decay guard.

A run is one bootstrap step followed by BDF2 steps of fixed size s.
The bootstrap is a convex-split backward-Euler step (implicit
4-Laplacian and biharmonic, explicit concave Laplacian), solved with
the same preconditioned machinery as the BDF2 systems; callers holding
a better first step can inject phi1 directly.

Each BDF2 step solves N(phi) = f warm-started at the extrapolant
2 phi^k - phi^{k-1} by default (warm_start selects the extrapolant,
the current iterate, or the zero field) and checks two invariants:

* the modified energy F_h(phi) + (1/4s)||phi - psi||_2^2
  + 1/2 ||grad_h(phi - psi)||_2^2 must not increase (within
  10 rel_tol relative slack) whenever A >= 1/16;
* the mean must not drift by more than mean_tol (the scheme conserves
  mass exactly; observed drift is rounding only).

Violations raise EnergyDecayError / MassDriftError, both subclasses of
StabilityError, or warn when guard="warn".
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels, _stencils
from .fields import CellField, GridSpec
from .precond import PrecondSymbol, build_symbol, build_symbol_weights
from .solvers import SolveStats, SolverConfig, SolverError, solve
from .system import ImplicitSystem, SchemeParams

__all__ = [
    "StepperState",
    "StepRecord",
    "StabilityError",
    "EnergyDecayError",
    "MassDriftError",
    "bootstrap",
    "step",
    "run",
]

MEAN_TOL = 1e-11


class StabilityError(RuntimeError):
    """A discrete stability assertion failed."""


class EnergyDecayError(StabilityError):
    """Modified energy increased beyond the solver-tolerance slack."""


class MassDriftError(StabilityError):
    """The mean drifted more than mean_tol in one step."""


@dataclass(frozen=True)
class StepperState:
    """Two-level history (phi^k, phi^{k-1}) at time t = k s."""

    phi_curr: CellField
    phi_prev: CellField
    k: int
    t: float

    def __post_init__(self) -> None:
        if self.phi_curr.grid != self.phi_prev.grid:
            raise ValueError("history fields live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.phi_curr.grid


@dataclass(frozen=True)
class StepRecord:
    """Per-step diagnostics row."""

    t: float
    F_h: float
    F_tilde: float
    mass: float
    roughness: float
    iters: int
    wall_ms: float


def _diagnostics(
    phi: np.ndarray, psi: np.ndarray, params: SchemeParams, h: float
) -> tuple[float, float, float, float]:
    """(F_h, F_tilde, mass, roughness) for the pair (phi, psi)."""
    h2 = h * h
    s_g4, s_g2, s_lap2 = _kernels.energy_sums(phi, h)
    f_h = (
        0.25 * h2 * s_g4
        - 0.5 * h2 * s_g2
        + 0.5 * params.epsilon ** 2 * h2 * s_lap2
    )
    s_sq, s_eg = _kernels.diff_sums(phi, psi, h)
    f_tilde = f_h + h2 * s_sq / (4.0 * params.s) + 0.5 * h2 * s_eg
    mass = float(phi.mean())
    dev = phi - mass
    rough = h * math.sqrt(float(np.dot(dev.ravel(), dev.ravel())) / dev.size)
    return f_h, f_tilde, mass, rough


def _centered(phi: CellField) -> CellField:
    mu = float(phi.values.mean())
    if mu == 0.0:
        return phi
    return CellField._wrap(phi.grid, phi.values - mu)


_WARM_STARTS = ("extrapolated", "current", "zero")


def bootstrap(
    phi0: CellField,
    params: SchemeParams,
    solver: SolverConfig = SolverConfig(),
    *,
    phi1: CellField | None = None,
    mean_tol: float = MEAN_TOL,
    warm_start: str = "extrapolated",
    stats_sink: list | None = None,
) -> tuple[StepperState, StepRecord]:
    """Produce the first step (phi^0, phi^1) from initial data.

    phi0 is centered to mean zero here. Without an injected phi1 one
    backward-Euler convex-splitting step is solved:

        phi1 - s plap4(phi1) + s eps^2 bih(phi1)
            = phi0 - s skew_lap(phi0).

    warm_start "zero" starts that solve from the zero field; the other
    modes start from phi0 (there is no history to extrapolate yet).
    """
    if warm_start not in _WARM_STARTS:
        raise ValueError(f"unknown warm_start mode {warm_start!r}")
    start = time.perf_counter()
    phi0 = _centered(phi0)
    grid = phi0.grid
    s = params.s
    if phi1 is not None:
        if phi1.grid != grid:
            raise ValueError("phi1 grid differs from phi0")
        phi1 = _centered(phi1)
        stats = SolveStats(0, True, 0.0, [0.0])
    else:
        rhs = phi0.values - s * _stencils.skew_lap(phi0.values, grid.h)
        sys = ImplicitSystem.backward_euler(
            params, CellField._wrap(grid, rhs)
        )
        symbol = build_symbol_weights(grid, *params.bootstrap_coeffs())
        init = phi0 if warm_start != "zero" else CellField.zeros(grid)
        phi1, stats = solve(sys, init, symbol, solver)
        if stats_sink is not None:
            stats_sink.append(stats)
        if not stats.converged:
            raise SolverError(
                f"bootstrap solve did not converge in {stats.iterations} "
                f"iterations (residual {stats.residual_history[-1]:.3e})"
            )
    drift = abs(float(phi1.values.mean()) - float(phi0.values.mean()))
    if drift > mean_tol:
        raise MassDriftError(f"bootstrap mean drift {drift:.3e} > {mean_tol}")
    f_h, f_tilde, mass, rough = _diagnostics(
        phi1.values, phi0.values, params, grid.h
    )
    wall_ms = (time.perf_counter() - start) * 1e3
    state = StepperState(phi_curr=phi1, phi_prev=phi0, k=1, t=s)
    record = StepRecord(
        t=s,
        F_h=f_h,
        F_tilde=f_tilde,
        mass=mass,
        roughness=rough,
        iters=stats.iterations,
        wall_ms=wall_ms,
    )
    return state, record


def step(
    state: StepperState,
    params: SchemeParams,
    solver: SolverConfig = SolverConfig(),
    *,
    symbol: PrecondSymbol | None = None,
    prev_f_tilde: float | None = None,
    mean_tol: float = MEAN_TOL,
    guard: str = "raise",
    warm_start: str = "extrapolated",
    stats_sink: list | None = None,
) -> tuple[StepperState, StepRecord]:
    """Advance one BDF2 step.

    prev_f_tilde is the modified energy of (phi^k, phi^{k-1}); it is
    recomputed when not supplied. guard is "raise" (default), "warn",
    or "off" for the energy-decay assertion. warm_start picks the
    solver's initial iterate: the extrapolant 2 phi^k - phi^{k-1}
    (default), the current step "current", or the zero field "zero".
    """
    if guard not in ("raise", "warn", "off"):
        raise ValueError(f"unknown guard mode {guard!r}")
    if warm_start not in _WARM_STARTS:
        raise ValueError(f"unknown warm_start mode {warm_start!r}")
    start = time.perf_counter()
    grid = state.grid
    h = grid.h
    s = params.s
    pk = state.phi_curr.values
    pkm1 = state.phi_prev.values
    if symbol is None:
        symbol = build_symbol(grid, params)

    f = _kernels.bdf2_rhs(pk, pkm1, s, params.A, h)
    sys = ImplicitSystem.bdf2(params, CellField._wrap(grid, f))
    if warm_start == "extrapolated":
        warm = CellField._wrap(grid, 2.0 * pk - pkm1)
    elif warm_start == "current":
        warm = state.phi_curr
    else:
        warm = CellField.zeros(grid)
    phi_new, stats = solve(sys, warm, symbol, solver)
    if stats_sink is not None:
        stats_sink.append(stats)
    if not stats.converged:
        raise SolverError(
            f"BDF2 solve at t={state.t + s:.6g} stopped after "
            f"{stats.iterations} iterations with residual "
            f"{stats.residual_history[-1]:.3e}"
        )

    drift = abs(float(phi_new.values.mean()) - float(pk.mean()))
    if drift > mean_tol:
        raise MassDriftError(
            f"mean drift {drift:.3e} > {mean_tol} at t={state.t + s:.6g}"
        )

    f_h, f_tilde, mass, rough = _diagnostics(phi_new.values, pk, params, h)
    if guard != "off":
        if prev_f_tilde is None:
            prev_f_tilde = _diagnostics(pk, pkm1, params, h)[1]
        slack = 10.0 * (solver.rel_tol * abs(prev_f_tilde) + solver.abs_tol)
        if f_tilde > prev_f_tilde + slack:
            msg = (
                f"modified energy rose {f_tilde - prev_f_tilde:.3e} "
                f"(slack {slack:.3e}) at t={state.t + s:.6g}"
            )
            if guard == "raise":
                raise EnergyDecayError(msg)
            warnings.warn(msg, stacklevel=2)

    wall_ms = (time.perf_counter() - start) * 1e3
    k_new = state.k + 1
    new_state = StepperState(
        phi_curr=phi_new, phi_prev=state.phi_curr, k=k_new, t=k_new * s
    )
    record = StepRecord(
        t=new_state.t,
        F_h=f_h,
        F_tilde=f_tilde,
        mass=mass,
        roughness=rough,
        iters=stats.iterations,
        wall_ms=wall_ms,
    )
    return new_state, record


def run(
    phi0: CellField,
    params: SchemeParams,
    solver: SolverConfig,
    T: float,
    observers: tuple = (),
    *,
    phi1: CellField | None = None,
    mean_tol: float = MEAN_TOL,
    guard: str = "raise",
    warm_start: str = "extrapolated",
    stats_sink: list | None = None,
) -> list[StepRecord]:
    """Evolve on [0, T]: one bootstrap step then floor(T/s) - 1 BDF2 steps.

    Observers are callables (record, state) invoked after every step,
    bootstrap included; per-step solver iteration counts ride on the
    records, full SolveStats land in stats_sink when a list is given.
    """
    s = params.s
    n_steps = int(math.floor(T / s + 1e-9))
    if n_steps < 1:
        raise ValueError(f"T={T} is shorter than one step s={s}")
    state, record = bootstrap(
        phi0, params, solver, phi1=phi1, mean_tol=mean_tol,
        warm_start=warm_start, stats_sink=stats_sink,
    )
    records = [record]
    for obs in observers:
        obs(record, state)
    symbol = build_symbol(state.grid, params)
    prev_f_tilde = record.F_tilde
    for _ in range(n_steps - 1):
        state, record = step(
            state,
            params,
            solver,
            symbol=symbol,
            prev_f_tilde=prev_f_tilde,
            mean_tol=mean_tol,
            guard=guard,
            warm_start=warm_start,
            stats_sink=stats_sink,
        )
        prev_f_tilde = record.F_tilde
        records.append(record)
        for obs in observers:
            obs(record, state)
    return records
