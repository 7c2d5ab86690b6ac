"""One-dimensional partitions of [0, 1] and the equidistribution update.

Piecewise-constant cell fields (adaptation function, residual averages,
quality measure) are plain 1-d float arrays with one entry per element.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidAdaptationFunction, InvalidArgument, NumericError

SN_SLACK = 1e-12


@dataclass(frozen=True)
class Mesh:
    """Strictly increasing nodes ``0 = x_0 < x_1 < ... < x_N = 1`` with ``N >= 2``.

    The node array is copied and made read-only on construction.
    """

    nodes: np.ndarray

    def __post_init__(self):
        x = np.array(self.nodes, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise InvalidArgument("a mesh needs at least 2 elements")
        if not np.all(np.isfinite(x)):
            raise NumericError("mesh nodes must be finite")
        if x[0] != 0.0 or x[-1] != 1.0:
            raise InvalidArgument("mesh endpoints must be exactly 0 and 1")
        if np.any(np.diff(x) <= 0.0):
            raise InvalidArgument("mesh nodes must be strictly increasing")
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    @property
    def n(self) -> int:
        """Number of elements."""
        return self.nodes.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def h(self) -> float:
        """Largest element width."""
        return float(self.widths.max())

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def __len__(self):
        return self.nodes.size

    def __eq__(self, other):
        if not isinstance(other, Mesh):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes)

    __hash__ = None


@dataclass(frozen=True)
class SNParams:
    """Bounds ``1/(rho0 N) <= h_i <= 2/N`` defining the admissible mesh set."""

    rho0: float = 10.0
    n: int | None = None  # None: take N from the mesh being checked

    def __post_init__(self):
        if not self.rho0 >= 1.0:
            raise InvalidArgument("rho0 must be >= 1")
        if self.n is not None and self.n < 2:
            raise InvalidArgument("n must be >= 2")


@dataclass(frozen=True)
class SNReport:
    passed: bool
    lower_violations: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    upper_violations: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def violations(self) -> np.ndarray:
        return np.union1d(self.lower_violations, self.upper_violations)


def uniform_mesh(n: int) -> Mesh:
    """Uniform mesh with ``n`` elements, ``x_i = i/n``."""
    if int(n) != n or n < 2:
        raise InvalidArgument(f"need an integer element count n >= 2, got {n!r}")
    n = int(n)
    x = np.arange(n + 1, dtype=float) / n
    x[-1] = 1.0
    return Mesh(x)


def _check_cell_field(mesh: Mesh, values, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (mesh.n,):
        raise InvalidArgument(f"{name} has shape {v.shape}, expected ({mesh.n},)")
    return v


def _check_rho(mesh: Mesh, rho) -> np.ndarray:
    rho = _check_cell_field(mesh, rho, "rho")
    if not np.all(np.isfinite(rho)):
        raise NumericError("adaptation function has non-finite values")
    if np.any(rho <= 0.0):
        raise InvalidAdaptationFunction("adaptation function must be strictly positive")
    return rho


def cumulative_mass(mesh: Mesh, rho) -> np.ndarray:
    """Integral of the piecewise-constant ``rho`` from 0 to each node (length N+1)."""
    rho = _check_rho(mesh, rho)
    return np.concatenate(([0.0], np.cumsum(rho * mesh.widths)))


def equidistribute(mesh: Mesh, rho) -> Mesh:
    """New mesh on which every cell carries mass ``sigma_h / N`` of ``rho``.

    ``rho`` is piecewise constant on ``mesh``, so its cumulative integral is
    piecewise linear and is inverted exactly. A target mass that falls on an
    old node is assigned to the cell on its left.
    """
    rho = _check_rho(mesh, rho)
    x = mesh.nodes
    n = mesh.n
    cum = cumulative_mass(mesh, rho)
    sigma = cum[-1]
    targets = np.arange(1, n) / n * sigma
    # j is 1-based: cum[j-1] < target <= cum[j]
    j = np.clip(np.searchsorted(cum, targets, side="left"), 1, n)
    y = x[j - 1] + (targets - cum[j - 1]) / rho[j - 1]
    y = np.minimum(np.maximum(y, x[j - 1]), x[j])
    nodes = np.concatenate(([0.0], y, [1.0]))
    if np.any(np.diff(nodes) <= 0.0):
        raise NumericError("equidistributed mesh lost strict monotonicity")
    return Mesh(nodes)


def quality_measure(mesh: Mesh, rho) -> np.ndarray:
    """Equidistribution quality ``Q_i = N rho_i h_i / sigma_h``.

    The mean of ``Q`` is one; ``max(Q) == 1`` exactly when ``mesh``
    equidistributes ``rho``.
    """
    rho = _check_rho(mesh, rho)
    mass = rho * mesh.widths
    return mesh.n * mass / mass.sum()


def mesh_distance(a: Mesh, b: Mesh) -> float:
    """Maximum node displacement between two meshes with the same N."""
    if a.n != b.n:
        raise InvalidArgument(f"meshes have different sizes ({a.n} vs {b.n})")
    return float(np.max(np.abs(a.nodes[1:-1] - b.nodes[1:-1]), initial=0.0))


def validate_in_SN(mesh: Mesh, params: SNParams) -> SNReport:
    """Check each cell width against ``1/(rho0 N) <= h_i <= 2/N``.

    Only reports; nothing is clamped. Violating cells are returned as
    0-based element indices. Bounds carry a 1e-12 relative roundoff slack.
    """
    n = mesh.n if params.n is None else params.n
    h = mesh.widths
    lower = np.flatnonzero(h < (1 - SN_SLACK) / (params.rho0 * n))
    upper = np.flatnonzero(h > (1 + SN_SLACK) * 2.0 / n)
    return SNReport(lower.size == 0 and upper.size == 0, lower, upper)
