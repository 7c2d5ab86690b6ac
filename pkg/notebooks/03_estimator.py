"""
Residual estimator and adaptation function
==========================================

The cell averages <r_h>_i of the residual drive both the adaptation function
rho_i = (1 + <r_h>_i^2 / alpha)^(1/3) and the estimators eta and eta~.
"""

# %%
import numpy as np

from equifem import adaptation_state, error_norms, make_problem, residual_averages, solve, uniform_mesh

prob = make_problem("babuska_rheinboldt")
sol = solve(prob, uniform_mesh(40))
avg = residual_averages(prob, sol)
print(avg[:5])

# %%
state = adaptation_state(prob, sol)
print("alpha:", state.alpha, "sigma:", state.sigma, "max Q:", state.max_quality)

# %%
# On a uniform mesh the estimator is far above the true error; adaptation closes that gap.
rep = error_norms(prob, sol)
print("H1 error:", rep.h1_semi)
print("eta:", rep.eta, "eta~:", rep.eta_tilde)
print("sqrt(alpha):", rep.alpha_sqrt, "||r||_2/3:", rep.r_quasi_norm)
