"""
Common zeros of random eigenfunctions on the sphere
---------------------------------------------------

Trace the nodal contours of u on an icosphere, walk along each one and
bisect the sign changes of v. Every pair from one eigenspace has a
common zero, and every contour carries an even number of them.
"""

import numpy as np

from nodallab import contour
from nodallab.harmonics import Eigenfunction
from nodallab.mesh import icosphere

rng = np.random.default_rng(2024)
mesh = icosphere(5)

for n in (1, 3, 6):
    u, v = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
    r = contour.common_zero_search(u, v, mesh)
    per = [p.count for p in r.per_contour]
    res = max(np.max(np.abs(u(r.points))), np.max(np.abs(v(r.points))))
    print(f"n={n}  contours {len(r.contours)}  changes per contour {per}  residual {res:.1e}")

###############################################################################
# The line integral of v |grad u| over a nodal contour of u vanishes for
# every v in the same eigenspace, but not for other degrees.

u = Eigenfunction.random(4, rng)
C = contour.trace_contours_mesh(u, icosphere(4), smooth=True)[0]
same = [contour.ortho_integral(u, C, Eigenfunction.basis(4, m)) for m in range(-4, 5)]
other = contour.ortho_integral(u, C, Eigenfunction.basis(0, 0))
print("same degree", np.max(np.abs(same)), " constant", other)

###############################################################################
# x z and y z share the whole equator: the search flags that contour as an
# infinite common zero set and still certifies the two poles.

u, v = contour.parallel_circle_pair(2, 1)
r = contour.common_zero_search(u, v, mesh)
print("infinite contours", r.infinite_contours)
print(np.round(r.points, 12))
