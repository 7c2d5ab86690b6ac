"""Fixed-point iteration solve -> estimate -> equidistribute.

Iteration ``k`` solves on mesh ``k`` (mesh 0 is the initial mesh), builds
the adaptation function and equidistributes it to obtain mesh ``k + 1``.
The reported iteration count is the index ``k`` of the mesh on which a
stopping test fired, i.e. the number of mesh updates performed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .estimator import AdaptationState, ErrorReport, adaptation_state, error_norms, h1_error
from .exceptions import InvalidArgument
from .fem import FemSolution, Problem, solve
from .mesh import Mesh, SNParams, equidistribute, mesh_distance, uniform_mesh, validate_in_SN

log = logging.getLogger(__name__)


class StopReason(str, Enum):
    QUALITY = "quality"
    MESH_DIFF = "mesh_diff"
    MAX_ITER = "max_iter"


@dataclass(frozen=True)
class AdaptOptions:
    kappa: float = 1.01
    tol_mesh: float = 1e-8
    max_iter: int = 1000
    record_trace: bool = False
    rho0: float = 10.0

    def __post_init__(self):
        if not self.kappa > 1.0:
            raise InvalidArgument(f"kappa must exceed 1, got {self.kappa}")
        if not self.tol_mesh >= 0.0:
            raise InvalidArgument(f"tol_mesh must be >= 0, got {self.tol_mesh}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidArgument(f"max_iter must be a positive integer, got {self.max_iter}")
        if not self.rho0 >= 1.0:
            raise InvalidArgument(f"rho0 must be >= 1, got {self.rho0}")


@dataclass(frozen=True)
class TraceRecord:
    """Diagnostics of iteration ``k``.

    ``mesh_diff`` is the distance from mesh ``k`` to its equidistributed
    update; ``h1_error`` is NaN without an exact solution.
    """

    k: int
    mesh_diff: float
    max_quality: float
    h1_error: float
    sn_violations: int


@dataclass(frozen=True)
class AdaptiveResult:
    final_mesh: Mesh
    final_solution: FemSolution
    final_state: AdaptationState
    final_report: Optional[ErrorReport]
    iterations: int
    converged_by: StopReason
    trace: Optional[list[TraceRecord]] = None
    meshes: Optional[list[Mesh]] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.converged_by is not StopReason.MAX_ITER


def adapt_step(problem: Problem, mesh: Mesh):
    """One application of the solve/equidistribute map.

    Returns the solution on ``mesh``, the adaptation state computed from it
    and the equidistributed mesh with the same number of elements.
    """
    sol = solve(problem, mesh)
    state = adaptation_state(problem, sol)
    return sol, state, equidistribute(mesh, state.rho)


def solve_adaptive(
    problem: Problem,
    n: int,
    opts: Optional[AdaptOptions] = None,
    initial_mesh: Optional[Mesh] = None,
) -> AdaptiveResult:
    """Iterate ``adapt_step`` from a uniform mesh with ``n`` elements.

    Stops when ``max(Q_eq) <= kappa`` on the current mesh, when the update
    moves no node by more than ``tol_mesh``, or after ``max_iter`` updates.
    Stopping at the iteration cap is reported, not raised.
    """
    opts = opts or AdaptOptions()
    mesh = initial_mesh if initial_mesh is not None else uniform_mesh(n)
    if mesh.n != n:
        raise InvalidArgument(f"initial mesh has {mesh.n} elements, expected {n}")
    sn = SNParams(rho0=opts.rho0)
    trace = [] if opts.record_trace else None
    meshes = [mesh] if opts.record_trace else None

    k = 0
    while True:
        sol, state, new_mesh = adapt_step(problem, mesh)
        diff = mesh_distance(mesh, new_mesh)
        qmax = state.max_quality
        if trace is not None:
            err = h1_error(problem, sol) if problem.has_exact else math.nan
            trace.append(TraceRecord(k, diff, qmax, err, int(validate_in_SN(mesh, sn).violations.size)))

        if qmax <= opts.kappa:
            reason = StopReason.QUALITY
            break
        if diff <= opts.tol_mesh:
            # final pair is re-solved on the updated mesh below
            mesh, k = new_mesh, k + 1
            sol = solve(problem, mesh)
            state = adaptation_state(problem, sol)
            reason = StopReason.MESH_DIFF
            break
        if k >= opts.max_iter:
            reason = StopReason.MAX_ITER
            break
        mesh, k = new_mesh, k + 1
        if meshes is not None:
            meshes.append(mesh)

    if meshes is not None and meshes[-1] is not mesh:
        meshes.append(mesh)
    log.debug("%s N=%d: stopped by %s after %d updates", problem.label, n, reason.value, k)
    report = error_norms(problem, sol, state) if problem.has_exact else None
    return AdaptiveResult(mesh, sol, state, report, k, reason, trace, meshes)


def convergence_order(results: Sequence[tuple[float, float]]) -> np.ndarray:
    """Pairwise observed orders ``log(v_k / v_{k+1}) / log(n_{k+1} / n_k)``."""
    if len(results) < 2:
        raise InvalidArgument("need at least two (n, value) pairs")
    n = np.array([r[0] for r in results], dtype=float)
    v = np.array([r[1] for r in results], dtype=float)
    if np.any(np.diff(n) <= 0):
        raise InvalidArgument("n must be strictly increasing")
    if not np.all(v > 0):
        raise InvalidArgument("values must be positive")
    return np.log(v[:-1] / v[1:]) / np.log(n[1:] / n[:-1])
