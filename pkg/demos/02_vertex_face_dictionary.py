"""The R/K matrices and the vertex-face dictionary, as residual sweeps.

Shows the Yang-Baxter and reflection equations for the vertex-type
matrices, the dynamical relations for the face-type one, and the
intertwiner identities that translate between the two pictures.
"""

import numpy as np

from ellipdw import (BoundaryConfig, ModularSetup, WeightVector,
                     crossing_residual, dybe_residual, face_vertex_residual,
                     k_factorization_residual, qybe_residual, re_residual,
                     unitarity_residual)
from ellipdw.boundary import vertex_K_matrix
from ellipdw.rmatrices import vertex_R_matrix

setup = ModularSetup(tau=1j, eta=0.31)
bc = BoundaryConfig(lambda1=0.41, lambda2=-0.23, zeta=0.17)
m = WeightVector(0.31 + 0.02j, -0.11 - 0.07j)
rng = np.random.default_rng(7)

print("Eight-vertex R-matrix at u = 0.29+0.07j (8 nonzero entries):")
r = vertex_R_matrix(0.29 + 0.07j, setup)
with np.printoptions(precision=4, suppress=True):
    print(np.abs(r))

print("\nReflection matrix (generically non-diagonal):")
with np.printoptions(precision=4, suppress=True):
    print(vertex_K_matrix(0.29 + 0.07j, bc, setup))

def sweep(label, fn, count=50):
    worst = max(fn(rng) for _ in range(count))
    print(f"  {label:28s} max residual = {worst:.3e}")

pts = lambda rng, k: rng.uniform(-0.4, 0.4, k) + 1j * rng.uniform(-0.15, 0.15, k)
print("\nDefining relations over 50 seeded draws:")
sweep("Yang-Baxter (vertex)", lambda g: qybe_residual(*pts(g, 3), setup))
sweep("Yang-Baxter (dynamical)", lambda g: dybe_residual(*pts(g, 3), m, setup))
sweep("unitarity (face)", lambda g: unitarity_residual(pts(g, 1)[0], m, setup))
sweep("crossing (face)", lambda g: crossing_residual(pts(g, 1)[0], m, setup))
sweep("reflection equation", lambda g: re_residual(*pts(g, 2), bc, setup))
sweep("vertex-face correspondence", lambda g: face_vertex_residual(*pts(g, 2), m, setup))
sweep("K-matrix factorization", lambda g: k_factorization_residual(pts(g, 1)[0], bc, setup))
