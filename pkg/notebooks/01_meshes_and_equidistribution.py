"""
Meshes and equidistribution
===========================

A mesh is a strictly increasing node vector on [0, 1]. Given a positive
piecewise-constant density rho, ``equidistribute`` returns the mesh whose
cells all carry the same share of the total mass sigma = int rho.
"""

# %%
import numpy as np

from equifem import Mesh, equidistribute, mesh_distance, quality_measure, uniform_mesh

mesh = uniform_mesh(8)
print(mesh.nodes)

# %%
# A density that is 50 times larger on the left quarter pulls nodes there.
rho = np.where(mesh.midpoints < 0.25, 50.0, 1.0)
new = equidistribute(mesh, rho)
print(np.round(new.nodes, 4))

# %%
# Mass per new cell, computed by overlapping the old cells with the new ones.
def cell_masses(old, rho, new):
    lo = np.maximum(old.nodes[None, :-1], new.nodes[:-1, None])
    hi = np.minimum(old.nodes[None, 1:], new.nodes[1:, None])
    return np.sum(rho * np.clip(hi - lo, 0, None), axis=1)

sigma = np.sum(rho * mesh.widths)
print(cell_masses(mesh, rho, new) / (sigma / mesh.n))

# %%
# The quality measure Q_i = N rho_i h_i / sigma is 1 on an equidistributed mesh.
# Measured against the old density the uniform mesh is far from it.
print("max Q on uniform mesh:", quality_measure(mesh, rho).max())
print("node shift:", mesh_distance(mesh, new))
