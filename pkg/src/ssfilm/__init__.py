"""Energy-stable finite-difference solver for a slope-selection
thin-film growth model on a periodic square domain.

Public API re-exports; see the individual modules for details.
"""

__version__ = "0.1.0"

from .diagnostics import (
    CauchyLevel,
    CauchyPair,
    cauchy_difference,
    cauchy_table,
    init_from_uniform,
    init_random,
    init_sinusoidal,
    loglog_fit,
    prolong,
    read_records_csv,
    restrict,
    write_records_csv,
)
from .fields import (
    CellField,
    EdgeFieldEW,
    EdgeFieldNS,
    GridSpec,
    VertexField,
    VertexVectorField,
    inner_cell,
    inner_edge,
    inner_vertex,
    mean,
    norm_p,
    roughness,
)
from .operators import (
    biharmonic,
    edge_grad,
    edge_grad_norm2,
    laplacian,
    norm_H1,
    norm_H2,
    p_laplacian4,
    skew_div,
    skew_grad,
    skew_grad_norm_p,
    skew_laplacian,
    vertex_to_center_avg,
)
from .precond import PrecondSymbol, apply_L, build_symbol, solve_L
from .snapshots import SnapshotFormatError, read_snapshot, write_snapshot
from .solvers import SolveStats, SolverConfig, SolverError, line_search, solve
from .stepping import (
    EnergyDecayError,
    MassDriftError,
    StabilityError,
    StepRecord,
    StepperState,
    bootstrap,
    run,
    step,
)
from .system import ImplicitSystem, SchemeParams

__all__ = [
    "__version__",
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
    "laplacian",
    "biharmonic",
    "skew_grad",
    "skew_div",
    "skew_laplacian",
    "p_laplacian4",
    "vertex_to_center_avg",
    "edge_grad",
    "skew_grad_norm_p",
    "edge_grad_norm2",
    "norm_H1",
    "norm_H2",
    "SchemeParams",
    "ImplicitSystem",
    "PrecondSymbol",
    "build_symbol",
    "apply_L",
    "solve_L",
    "SolverConfig",
    "SolveStats",
    "SolverError",
    "line_search",
    "solve",
    "StepperState",
    "StepRecord",
    "StabilityError",
    "EnergyDecayError",
    "MassDriftError",
    "bootstrap",
    "step",
    "run",
    "init_sinusoidal",
    "init_random",
    "init_from_uniform",
    "loglog_fit",
    "prolong",
    "restrict",
    "cauchy_difference",
    "CauchyLevel",
    "CauchyPair",
    "cauchy_table",
    "write_records_csv",
    "read_records_csv",
    "read_snapshot",
    "write_snapshot",
    "SnapshotFormatError",
]
