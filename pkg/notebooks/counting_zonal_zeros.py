"""
Counting common zeros of two zonal harmonics
--------------------------------------------

The nodal set of P_n(<x, a>) is n parallel circles. Two such families meet
in finitely many points, which we count directly and again by projecting
both families to chords in the plane through a and b.
"""

import numpy as np

from nodallab import circles

a = np.array([0.0, 0.0, 1.0])
b = np.array([0.0, 1.0, 1.0]) / np.sqrt(2)

for n in (1, 2, 5, 10):
    d = circles.count_common_zeros_direct(a, b, n)
    c = circles.chord_model_count(a, b, n)
    print(f"n={n:2d}  direct {d.total_sphere:4d}  chords {c.total_sphere:4d}")

###############################################################################
# Nearly parallel axes: every circle of one family meets its neighbour in
# the other family twice, and nothing else.

a, b = circles.axes_at_angle(1e-3)
print([circles.count_common_zeros_direct(a, b, n).total_sphere for n in range(1, 11)])

###############################################################################
# Orthogonal axes. The ratio n(a, b) / n^2 tends to a constant.

for row in circles.asymptotic_c_sweep([25, 50, 100, 200, 400]):
    print(f"n={row.n:3d}  n(a,b)={row.count.total_sphere:6d}  ratio={row.ratio:.5f}")

# the zeros follow the arcsine law, so the pair condition x^2 + y^2 < 1 has
# probability 1/2 and the constant is 1
print("fit", circles.extrapolate_c([100, 200, 300, 400]))
print("arcsine law", circles.arcsine_limit_c())

###############################################################################
# Random axes, n = 2: only 4 and 8 show up, 6 needs a tangency.

rng = np.random.default_rng(0)
counts = circles.random_pair_counts(2, 2000, rng)
print(dict(zip(*np.unique(counts, return_counts=True))))
