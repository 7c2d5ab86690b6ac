"""Linear finite elements for ``-(a u')' + b u' + c u = f``, ``u(0) = u(1) = 0``.

Element integrals use a fixed Gauss-Legendre rule on every cell. The interior
system couples only neighbouring hat functions and is solved with the Thomas
recurrence.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import (
    IllPosedProblem,
    InvalidArgument,
    NumericError,
    OutOfDomain,
    SingularSystem,
)
from .mesh import Mesh

QUADRATURE_ORDER = 5
COERCIVITY_TOL = 1e-12
PIVOT_TOL = 1e-300

Function = Callable[[np.ndarray], np.ndarray]


def _zero(x):
    return np.zeros_like(x, dtype=float)


@dataclass(frozen=True)
class Problem:
    """Coefficients and data of a two-point boundary value problem.

    All callables take and return float arrays of the same shape. ``da`` and
    ``db`` are the derivatives of ``a`` and ``b``; they are needed by the
    residual and the coercivity check and are never approximated. The exact
    solution ``u``, its derivative ``du`` and the exact residual
    ``r = f + a'u' - b u' - c u`` are optional.
    """

    a: Function
    f: Function
    da: Function = _zero
    b: Function = _zero
    db: Function = _zero
    c: Function = _zero
    u: Optional[Function] = None
    du: Optional[Function] = None
    r: Optional[Function] = None
    label: str = "problem"

    @property
    def has_exact(self) -> bool:
        return self.u is not None and self.du is not None

    def eval(self, name: str, x: np.ndarray) -> np.ndarray:
        """Evaluate coefficient ``name`` at ``x``, broadcasting constants."""
        fn = getattr(self, name)
        if fn is None:
            raise InvalidArgument(f"problem {self.label!r} has no {name!r}")
        with np.errstate(all="ignore"):
            v = np.broadcast_to(np.asarray(fn(x), dtype=float), np.shape(x))
        if not np.all(np.isfinite(v)):
            raise NumericError(f"non-finite value of {name!r} in problem {self.label!r}")
        return v


@dataclass(frozen=True)
class TridiagonalSystem:
    """Interior system ``A U = F`` of size ``N - 1``.

    ``sub[k] = A[k+1, k]`` and ``sup[k] = A[k, k+1]``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        m = np.size(self.diag)
        if m < 1 or np.size(self.rhs) != m or np.size(self.sub) != m - 1 or np.size(self.sup) != m - 1:
            raise InvalidArgument(
                f"inconsistent tridiagonal sizes: sub={np.size(self.sub)}, diag={m}, "
                f"sup={np.size(self.sup)}, rhs={np.size(self.rhs)}"
            )

    @property
    def size(self) -> int:
        return np.size(self.diag)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[1:] += self.sub * v[:-1]
        out[:-1] += self.sup * v[1:]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)


@dataclass(frozen=True)
class FemSolution:
    """Nodal values of the piecewise-linear approximation on ``mesh``."""

    mesh: Mesh
    nodal: np.ndarray

    def __post_init__(self):
        u = np.array(self.nodal, dtype=float)
        if u.shape != self.mesh.nodes.shape:
            raise InvalidArgument("nodal vector length does not match the mesh")
        if u[0] != 0.0 or u[-1] != 0.0:
            raise InvalidArgument("boundary values must be exactly zero")
        u.setflags(write=False)
        object.__setattr__(self, "nodal", u)

    @property
    def slopes(self) -> np.ndarray:
        """Constant derivative on each cell."""
        return np.diff(self.nodal) / self.mesh.widths

    def at_points(self, points: np.ndarray) -> np.ndarray:
        """Values at per-cell sample points of shape ``(N, q)``."""
        x = self.mesh.nodes
        return self.nodal[:-1, None] + self.slopes[:, None] * (points - x[:-1, None])


def cell_quadrature(mesh: Mesh, order: int = QUADRATURE_ORDER):
    """Gauss-Legendre points and weights mapped to every cell, each ``(N, order)``."""
    t, w = np.polynomial.legendre.leggauss(order)
    h = mesh.widths[:, None]
    points = mesh.midpoints[:, None] + 0.5 * h * t[None, :]
    weights = 0.5 * h * w[None, :]
    return points, weights


def element_matrices(problem: Problem, mesh: Mesh, order: int = QUADRATURE_ORDER):
    """Local stiffness ``K[e, i, j] = B(phi_j, phi_i)`` and load ``F[e, i] = (f, phi_i)``.

    Local index 0 is the left node of the element, 1 the right node.
    """
    X, W = cell_quadrature(mesh, order)
    h = mesh.widths[:, None]
    a = problem.eval("a", X)
    b = problem.eval("b", X)
    c = problem.eval("c", X)
    f = problem.eval("f", X)
    if np.any(a <= 0.0):
        raise IllPosedProblem(f"a(x) <= 0 at a quadrature point of {problem.label!r}")
    db = problem.eval("db", X)
    if np.any(c - 0.5 * db < -COERCIVITY_TOL):
        raise IllPosedProblem(f"c - b'/2 < 0 at a quadrature point of {problem.label!r}")

    t = (X - mesh.nodes[:-1, None]) / h
    phi = (1.0 - t, t)
    dphi = (-1.0 / h, 1.0 / h)
    K = np.empty((mesh.n, 2, 2))
    F = np.empty((mesh.n, 2))
    for i in range(2):
        F[:, i] = np.sum(W * f * phi[i], axis=1)
        for j in range(2):
            integrand = a * dphi[j] * dphi[i] + b * dphi[j] * phi[i] + c * phi[j] * phi[i]
            K[:, i, j] = np.sum(W * integrand, axis=1)
    return K, F


def assemble(problem: Problem, mesh: Mesh, order: int = QUADRATURE_ORDER) -> TridiagonalSystem:
    """Assemble the Galerkin system on the interior nodes ``x_1 .. x_{N-1}``."""
    K, F = element_matrices(problem, mesh, order)
    diag = K[:-1, 1, 1] + K[1:, 0, 0]
    sub = K[1:-1, 1, 0]
    sup = K[1:-1, 0, 1]
    rhs = F[:-1, 1] + F[1:, 0]
    return TridiagonalSystem(sub, diag, sup, rhs)


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Thomas algorithm without pivoting.

    Raises SingularSystem when an elimination pivot falls below 1e-300 in
    magnitude.
    """
    m = system.size
    sub = np.asarray(system.sub, dtype=float)
    sup = np.asarray(system.sup, dtype=float)
    d = np.array(system.diag, dtype=float)
    r = np.array(system.rhs, dtype=float)
    if abs(d[0]) < PIVOT_TOL:
        raise SingularSystem("zero pivot in row 0")
    for k in range(1, m):
        w = sub[k - 1] / d[k - 1]
        d[k] -= w * sup[k - 1]
        r[k] -= w * r[k - 1]
        if abs(d[k]) < PIVOT_TOL:
            raise SingularSystem(f"zero pivot in row {k}")
    x = np.empty(m)
    x[-1] = r[-1] / d[-1]
    for k in range(m - 2, -1, -1):
        x[k] = (r[k] - sup[k] * x[k + 1]) / d[k]
    if not np.all(np.isfinite(x)):
        raise NumericError("tridiagonal solve produced non-finite values")
    return x


def solve(problem: Problem, mesh: Mesh, order: int = QUADRATURE_ORDER) -> FemSolution:
    """Finite element solution of ``problem`` on ``mesh``."""
    interior = solve_tridiagonal(assemble(problem, mesh, order))
    return FemSolution(mesh, np.concatenate(([0.0], interior, [0.0])))


def evaluate(sol: FemSolution, x: float):
    """Value and derivative of ``u_h`` at ``x``.

    At an interior node the slope of the cell to the left is returned; at
    ``x = 0`` the slope of the first cell.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfDomain(f"x = {x} is outside [0, 1]")
    nodes = sol.mesh.nodes
    e = int(np.clip(np.searchsorted(nodes, x, side="left") - 1, 0, sol.mesh.n - 1))
    slope = sol.slopes[e]
    return float(sol.nodal[e] + slope * (x - nodes[e])), float(slope)
