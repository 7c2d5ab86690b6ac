"""Adaptive linear finite elements on equidistributing meshes in 1D."""

from .adapt import (
    AdaptiveResult,
    AdaptOptions,
    StopReason,
    TraceRecord,
    adapt_step,
    convergence_order,
    solve_adaptive,
)
from .estimator import (
    AdaptationState,
    ErrorReport,
    adaptation_function,
    adaptation_state,
    error_norms,
    estimators,
    h1_error,
    intensity,
    quasi_norm,
    residual_averages,
)
from .exceptions import (
    EquifemError,
    IllPosedProblem,
    InvalidAdaptationFunction,
    InvalidArgument,
    NumericError,
    OutOfDomain,
    SingularSystem,
    Unsupported,
)
from .fem import FemSolution, Problem, TridiagonalSystem, assemble, evaluate, solve, solve_tridiagonal
from .mesh import (
    Mesh,
    SNParams,
    SNReport,
    equidistribute,
    mesh_distance,
    quality_measure,
    uniform_mesh,
    validate_in_SN,
)
from .problems import Benchmark, BenchmarkSpec, make_problem
from .sweep import RunConfig, SummaryRow, emit_trace, run_sweep

__version__ = "0.1.0"
