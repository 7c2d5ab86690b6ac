"""
Adaptive runs and convergence tables
====================================

``solve_adaptive`` alternates solve, estimate and equidistribute until the mesh
quality drops below kappa or the mesh stops moving. ``run_sweep`` repeats this
over a list of N, where N counts mesh points, and adds observed orders.
The same sweep is available from the shell as ``equifem solve``.
"""

# %%
from equifem import AdaptOptions, BenchmarkSpec, RunConfig, make_problem, run_sweep, solve_adaptive

res = solve_adaptive(make_problem("reaction_diffusion"), 160, AdaptOptions(record_trace=True))
print(res.converged_by.value, res.iterations)
for rec in res.trace:
    print(rec.k, f"{rec.mesh_diff:.2e}", f"{rec.max_quality - 1:.2e}", f"{rec.h1_error:.4f}")

# %%
# Nodes crowd into the two boundary layers of width sqrt(eps).
print(res.final_mesh.widths.min(), res.final_mesh.widths.max())

# %%
for name in ("reaction_diffusion", "convection_dominated", "babuska_rheinboldt"):
    print(name)
    for row in run_sweep(RunConfig(BenchmarkSpec(name), (21, 41, 81, 161, 321, 641))):
        order = "" if row.order_h1 is None else f"{row.order_h1:.2f}"
        print(f"  {row.n:4d} {row.iterations:5d} {row.converged_by:9s} {row.h1_error:.3e} {row.eta_tilde:.3e} {order}")

# %%
# Small N: the fixed-point iteration need not settle, so results there carry
# the stop reason rather than a convergence claim.
res = solve_adaptive(make_problem("convection_dominated"), 20, AdaptOptions(max_iter=200))
print(res.converged_by.value, res.iterations)
