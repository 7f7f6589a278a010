"""
Where common zeros can fail to exist
------------------------------------

On the torus cos s and sin s have no common zero. Their nodal domains
cover the surface and the incidence graph is a 4-cycle. On the sphere the
domains of a pair never cover.
"""

import numpy as np

from nodallab import harmonics, incidence, orbits
from nodallab.harmonics import Eigenfunction
from nodallab.mesh import icosphere, torus_mesh

tm = torus_mesh(64)
u, v = harmonics.torus_surface_u, harmonics.torus_surface_v
g = incidence.build_incidence(u, v, tm)
cov = incidence.check_covering(u, v, tm)
rep = incidence.check_proof_conditions(g, cov)
print("min u^2+v^2", harmonics.torus_min_norm_sq())
print("edges", g.edges, "covering", cov, "cycle", rep.cycle)

rng = np.random.default_rng(5)
mesh = icosphere(4)
u, v = Eigenfunction.random(3, rng), Eigenfunction.random(3, rng)
print("sphere covering", incidence.check_covering(u, v, mesh))
for row in incidence.covering_sensitivity(u, v, mesh):
    print("  floor %.0e  vertex witnesses %5d  covers %s" % row)

###############################################################################
# Orbits of SU(2) on C^2 meet every complex hyperplane.

v = np.array([1.0 + 2j, -0.5j])
h = np.array([0.3, 1.0 - 1j])
cert = orbits.orbit_meets_hyperplane(v, h, rng)
print("SU(2)", cert.element.matrix.round(6).tolist(), cert.residual)

###############################################################################
# With a reducible representation the orbit can miss: l(x) + q(x) with
# l = x3, q = x1^2 + x2^2 - 2 x3^2 stays away from the codimension 2 subspace.

for res in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
    print(res, orbits.counterexample_min(res))
print("limit", orbits.COUNTEREXAMPLE_LIMIT)
