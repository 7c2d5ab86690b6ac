"""Residual-based error indicator and the adaptation function built from it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import NumericError, Unsupported
from .fem import FemSolution, Problem, cell_quadrature
from .mesh import Mesh, quality_measure, uniform_mesh

ALPHA_FLOOR = 1e-30
QUASI_NORM_PANELS = 4096
LINF_SAMPLES = 17


@dataclass(frozen=True)
class AdaptationState:
    """Everything the mesh update needs, computed from one solution.

    ``averages`` are the cell L2 averages of the residual, ``alpha`` the
    intensity parameter, ``rho`` the piecewise-constant adaptation function,
    ``sigma`` the total mass ``sum(rho_i h_i)`` and ``quality`` the
    equidistribution quality measure of the current mesh.
    """

    averages: np.ndarray
    alpha: float
    rho: np.ndarray
    sigma: float
    quality: np.ndarray

    @property
    def max_quality(self) -> float:
        return float(self.quality.max())


@dataclass(frozen=True)
class ErrorReport:
    """Error norms and estimator values for one solution.

    ``eta`` and ``eta_tilde`` are bounds on ``h1_semi``: the raw indicator
    values ``eta_raw`` / ``eta_tilde_raw`` multiplied by
    ``reliability_constant = 1 / (2 min a)``. ``r_quasi_norm`` is NaN when
    the problem has no exact residual.
    """

    h1_semi: float
    l2: float
    linf: float
    eta: float
    eta_tilde: float
    alpha_sqrt: float
    r_quasi_norm: float
    eta_raw: float
    eta_tilde_raw: float
    reliability_constant: float


def residual_values(problem: Problem, sol: FemSolution, points: np.ndarray) -> np.ndarray:
    """``r_h = f + a' u_h' - b u_h' - c u_h`` at per-cell points ``(N, q)``."""
    s = sol.slopes[:, None]
    uh = sol.at_points(points)
    return (
        problem.eval("f", points)
        + problem.eval("da", points) * s
        - problem.eval("b", points) * s
        - problem.eval("c", points) * uh
    )


def residual_averages(problem: Problem, sol: FemSolution) -> np.ndarray:
    """Cell L2 averages ``(h_i^{-1} int_{K_i} r_h^2)^{1/2}``."""
    X, W = cell_quadrature(sol.mesh)
    r = residual_values(problem, sol, X)
    avg = np.sqrt(np.sum(W * r * r, axis=1) / sol.mesh.widths)
    if not np.all(np.isfinite(avg)):
        raise NumericError("non-finite residual average")
    return avg


def intensity(mesh: Mesh, averages) -> float:
    """``alpha_h = [sum_i h_i <r_h>_i^(2/3)]^3``."""
    averages = np.asarray(averages, dtype=float)
    return float(np.sum(mesh.widths * np.cbrt(averages) ** 2) ** 3)


def adaptation_function(averages, alpha: float) -> np.ndarray:
    """``rho_i = (1 + <r_h>_i^2 / alpha)^(1/3)``; alpha is floored at 1e-30."""
    averages = np.asarray(averages, dtype=float)
    return np.cbrt(1.0 + averages**2 / max(alpha, ALPHA_FLOOR))


def estimators(mesh: Mesh, averages, alpha: float, rho) -> tuple[float, float]:
    """Raw indicator ``eta`` and its regularized bound ``eta_tilde``.

    ``eta^2 = sum h_i^3 <r_h>_i^2`` and ``eta_tilde^2 = alpha sum (h_i rho_i)^3``.
    """
    h = mesh.widths
    averages = np.asarray(averages, dtype=float)
    rho = np.asarray(rho, dtype=float)
    eta = np.sqrt(np.sum(h**3 * averages**2))
    eta_tilde = np.sqrt(alpha * np.sum((h * rho) ** 3))
    return float(eta), float(eta_tilde)


def adaptation_state(problem: Problem, sol: FemSolution) -> AdaptationState:
    mesh = sol.mesh
    avg = residual_averages(problem, sol)
    alpha = intensity(mesh, avg)
    rho = adaptation_function(avg, alpha)
    return AdaptationState(
        averages=avg,
        alpha=alpha,
        rho=rho,
        sigma=float(np.sum(rho * mesh.widths)),
        quality=quality_measure(mesh, rho),
    )


def reliability_constant(problem: Problem, mesh: Mesh) -> float:
    """``1 / (2 a_0)`` with ``a_0`` the minimum of ``a`` over nodes and quadrature points.

    Combines ``||v - I_h v||_K <= (h_K / 2) ||v'||_K`` with coercivity
    ``a_0 ||e'||^2 <= B(e, e)``, so that ``||e'|| <= eta / (2 a_0)``.
    """
    X, _ = cell_quadrature(mesh)
    a0 = min(problem.eval("a", mesh.nodes).min(), problem.eval("a", X).min())
    return float(0.5 / a0)


def quasi_norm(fn, panels: int = QUASI_NORM_PANELS) -> float:
    """``(int_0^1 |fn|^(2/3) dx)^(3/2)`` by composite Gauss rule on uniform panels."""
    X, W = cell_quadrature(uniform_mesh(panels))
    with np.errstate(all="ignore"):
        v = np.asarray(fn(X), dtype=float)
    if not np.all(np.isfinite(v)):
        raise NumericError("non-finite integrand in quasi-norm")
    return float(np.sum(W * np.cbrt(np.abs(v)) ** 2) ** 1.5)


def h1_error(problem: Problem, sol: FemSolution) -> float:
    """``||(u - u_h)'||`` on [0, 1]."""
    if not problem.has_exact:
        raise Unsupported(f"problem {problem.label!r} has no exact solution")
    X, W = cell_quadrature(sol.mesh)
    de = problem.eval("du", X) - sol.slopes[:, None]
    return float(np.sqrt(np.sum(W * de * de)))


def error_norms(
    problem: Problem, sol: FemSolution, state: Optional[AdaptationState] = None
) -> ErrorReport:
    """True errors against the exact solution plus estimator values."""
    if not problem.has_exact:
        raise Unsupported(f"problem {problem.label!r} has no exact solution")
    mesh = sol.mesh
    if state is None:
        state = adaptation_state(problem, sol)

    X, W = cell_quadrature(mesh)
    e = problem.eval("u", X) - sol.at_points(X)
    t = np.linspace(0.0, 1.0, LINF_SAMPLES)
    S = mesh.nodes[:-1, None] + mesh.widths[:, None] * t[None, :]
    linf = np.max(np.abs(problem.eval("u", S) - sol.at_points(S)))

    eta, eta_tilde = estimators(mesh, state.averages, state.alpha, state.rho)
    const = reliability_constant(problem, mesh)
    rq = quasi_norm(problem.r) if problem.r is not None else float("nan")
    return ErrorReport(
        h1_semi=h1_error(problem, sol),
        l2=float(np.sqrt(np.sum(W * e * e))),
        linf=float(linf),
        eta=const * eta,
        eta_tilde=const * eta_tilde,
        alpha_sqrt=float(np.sqrt(state.alpha)),
        r_quasi_norm=rq,
        eta_raw=eta,
        eta_tilde_raw=eta_tilde,
        reliability_constant=const,
    )
