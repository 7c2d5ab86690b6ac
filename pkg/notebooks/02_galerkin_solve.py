"""
Linear finite elements
======================

``solve`` assembles the tridiagonal Galerkin system for
-(a u')' + b u' + c u = f with u(0) = u(1) = 0 and solves it by the Thomas
algorithm.
"""

# %%
import numpy as np

from equifem import Mesh, Problem, assemble, evaluate, h1_error, solve, uniform_mesh

prob = Problem(
    a=lambda x: np.ones_like(x),
    f=lambda x: np.pi**2 * np.sin(np.pi * x),
    u=lambda x: np.sin(np.pi * x),
    du=lambda x: np.pi * np.cos(np.pi * x),
)

# %%
system = assemble(prob, uniform_mesh(4))
print(system.to_dense())

# %%
# First order in the energy seminorm on uniform meshes.
for n in (8, 16, 32, 64):
    print(n, h1_error(prob, solve(prob, uniform_mesh(n))))

# %%
# For a = 1 the nodal values are exact on any mesh, up to quadrature of f.
mesh = Mesh([0.0, 0.1, 0.45, 0.5, 0.9, 1.0])
sol = solve(prob, mesh)
print(np.abs(sol.nodal - prob.u(mesh.nodes)).max())
print(evaluate(sol, 0.3))
