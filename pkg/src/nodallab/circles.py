"""Nodal circles of zonal harmonics and counting their common zeros.

The nodal set of x -> P_n(<x, a>) is the n circles <x, a> = x_k at the
zeros x_k of P_n. For two axes a, b the common zeros are counted two ways:

* directly, by intersecting every pair of circles on S^2;
* in the chord model: orthogonal projection onto the plane through a and b
  turns each circle into a chord of the unit disc, and a chord crossing
  strictly inside the disc lifts to exactly two points of S^2 (one on each
  side of the plane), a crossing on the boundary circle to one tangency.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParallelAxesError
from .harmonics import normalize, random_sphere_points
from .legendre import legendre_zeros

#: |<a, b>| above this is treated as parallel
PARALLEL_TOL = 1e-12
#: |gamma^2| (equivalently |1 - |P|^2| in the chord plane) below this is a tangency
TANGENT_TOL = 1e-10
#: determinant floor for the 2x2 chord solve
DET_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class NodalCircle:
    """The circle {x in S^2 : <x, axis> = height}.

    ``degree`` records the zonal harmonic the circle came from, if any.
    """

    axis: np.ndarray
    height: float
    degree: int | None = None

    def __post_init__(self):
        if not -1.0 < self.height < 1.0:
            raise DomainError("a nodal circle needs |height| < 1")
        object.__setattr__(self, "axis", normalize(self.axis))

    @property
    def radius(self):
        """Euclidean radius sqrt(1 - height^2)."""
        return float(np.sqrt(1.0 - self.height ** 2))

    def frame(self):
        """Orthonormal ``(e1, e2)`` spanning the plane orthogonal to the axis."""
        a = self.axis
        helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = normalize(np.cross(a, helper))
        return e1, np.cross(a, e1)

    def sample(self, count):
        """``count`` points at equal parameter spacing."""
        t = 2 * np.pi * np.arange(count) / count
        e1, e2 = self.frame()
        r = self.radius
        return self.height * self.axis + r * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2)


@dataclass(frozen=True)
class CircleCrossing:
    """Result of intersecting two circles: 0, 1 (tangent) or 2 points."""

    points: np.ndarray
    tangent: bool = False
    gamma_sq: float = field(default=float("nan"), compare=False)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class IntersectionCount:
    """Interior chord crossings, boundary tangencies, and the implied count on S^2."""

    interior: int
    boundary: int

    @property
    def total_sphere(self):
        return 2 * self.interior + self.boundary

    @property
    def generic(self):
        """Count ignoring tangencies."""
        return 2 * self.interior

    @property
    def with_multiplicity(self):
        """Count with each tangency counted twice."""
        return 2 * self.interior + 2 * self.boundary


@dataclass(frozen=True, eq=False)
class ChordDiagram:
    """The two chord families in the plane through a and b.

    Coordinates: a projects to (1, 0); b to (cos t, sin t) with t the angle
    between the axes. Family A consists of the lines P . (1, 0) = x_j, family
    B of P . (cos t, sin t) = x_k.
    """

    axis_angle: float
    chords_a: np.ndarray
    chords_b: np.ndarray

    @property
    def direction_a(self):
        return np.array([1.0, 0.0])

    @property
    def direction_b(self):
        return np.array([np.cos(self.axis_angle), np.sin(self.axis_angle)])

    def crossings(self):
        """All pairwise line crossings, shape ``(len(A), len(B), 2)``."""
        m = np.stack([self.direction_a, self.direction_b])
        det = np.linalg.det(m)
        if abs(det) < DET_TOL:
            raise ParallelAxesError("chord families are parallel")
        s, t = np.meshgrid(self.chords_a, self.chords_b, indexing="ij")
        rhs = np.stack([s, t], axis=-1)
        return np.linalg.solve(m, rhs[..., None])[..., 0]

    def classify(self):
        """Per-crossing squared radius minus one: < 0 inside, ~0 on the boundary."""
        p = self.crossings()
        return np.sum(p * p, axis=-1) - 1.0


def nodal_circles(a, n):
    """The n nodal circles of P_n(<x, a>)."""
    if n < 1:
        raise DomainError("nodal_circles needs n >= 1")
    return [NodalCircle(a, float(h), n) for h in legendre_zeros(n).zeros]


def _axis_cos(a, b):
    c = float(np.dot(a, b))
    if abs(c) > 1.0 - PARALLEL_TOL:
        raise ParallelAxesError(f"axes are parallel (<a,b> = {c!r})")
    return c


def circle_pair_intersections(c1: NodalCircle, c2: NodalCircle) -> CircleCrossing:
    """Closed-form intersection of two circles with non-parallel axes.

    Writing x = alpha a + beta b + gamma w with w a unit normal of span(a, b),
    the circle equations fix alpha and beta and |x| = 1 fixes gamma^2.
    """
    a, b = c1.axis, c2.axis
    c = _axis_cos(a, b)
    s, t = c1.height, c2.height
    det = 1.0 - c * c
    alpha = (s - c * t) / det
    beta = (t - c * s) / det
    gamma_sq = 1.0 - (alpha * alpha + beta * beta + 2 * alpha * beta * c)
    base = alpha * a + beta * b
    if abs(gamma_sq) < TANGENT_TOL:
        return CircleCrossing(base[None, :] / np.linalg.norm(base), True, gamma_sq)
    if gamma_sq < 0:
        return CircleCrossing(np.empty((0, 3)), False, gamma_sq)
    w = normalize(np.cross(a, b))
    g = np.sqrt(gamma_sq)
    return CircleCrossing(np.stack([base + g * w, base - g * w]), False, gamma_sq)


def _gamma_sq_table(a, b, n):
    c = _axis_cos(a, b)
    x = legendre_zeros(n).zeros
    s, t = np.meshgrid(x, x, indexing="ij")
    det = 1.0 - c * c
    alpha = (s - c * t) / det
    beta = (t - c * s) / det
    return 1.0 - (alpha * alpha + beta * beta + 2 * alpha * beta * c)


def count_common_zeros_direct(a, b, n) -> IntersectionCount:
    """Count N_u ∩ N_v for u = P_n(<x,a>), v = P_n(<x,b>) by intersecting all n^2 circle pairs."""
    a, b = normalize(a), normalize(b)
    g2 = _gamma_sq_table(a, b, n)
    tangent = np.abs(g2) < TANGENT_TOL
    crossing = (g2 > 0) & ~tangent
    return IntersectionCount(int(crossing.sum()), int(tangent.sum()))


def common_zero_points(a, b, n):
    """All intersection points of the two zonal nodal sets, shape ``(k, 3)``."""
    out = []
    for c1 in nodal_circles(a, n):
        for c2 in nodal_circles(b, n):
            out.append(circle_pair_intersections(c1, c2).points)
    return np.concatenate(out) if out else np.empty((0, 3))


def chord_diagram(a, b, n) -> ChordDiagram:
    a, b = normalize(a), normalize(b)
    c = _axis_cos(a, b)
    x = legendre_zeros(n).zeros
    return ChordDiagram(float(np.arccos(c)), x.copy(), x.copy())


def chord_model_count(a, b, n) -> IntersectionCount:
    """Count the same common zeros through chord crossings in the plane of a and b."""
    r = chord_diagram(a, b, n).classify()
    boundary = np.abs(r) < TANGENT_TOL
    interior = (r < 0) & ~boundary
    return IntersectionCount(int(interior.sum()), int(boundary.sum()))


PERP_A = np.array([0.0, 0.0, 1.0])
PERP_B = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class SweepRow:
    n: int
    angle: float
    count: IntersectionCount

    @property
    def ratio(self):
        return self.count.total_sphere / self.n ** 2


def asymptotic_c_sweep(n_values, a=PERP_A, b=PERP_B):
    """n(a, b) / n^2 for orthogonal axes, one row per degree."""
    angle = float(np.arccos(np.clip(np.dot(normalize(a), normalize(b)), -1, 1)))
    return [SweepRow(int(n), angle, chord_model_count(a, b, int(n))) for n in n_values]


def zero_pair_fraction(n):
    """Twice the number of zero pairs (x_j, x_k) with x_j^2 + x_k^2 < 1, over n^2.

    Counts lattice pairs from the sorted zeros only (no geometry): for each x_j
    the admissible x_k form the interval |x_k| < sqrt(1 - x_j^2).
    """
    x = legendre_zeros(int(n)).zeros
    bound = np.sqrt(1.0 - x * x)
    inside = np.searchsorted(x, bound, side="left") - np.searchsorted(x, -bound, side="right")
    return 2.0 * inside.sum() / n ** 2


def extrapolate_c(n_values):
    """Least-squares fit of fraction(n) = c + d / n; returns ``(c, d)``."""
    n = np.asarray(n_values, float)
    f = np.array([zero_pair_fraction(int(k)) for k in n_values])
    A = np.stack([np.ones_like(n), 1.0 / n], axis=1)
    (c, d), *_ = np.linalg.lstsq(A, f, rcond=None)
    return float(c), float(d)


def arcsine_limit_c():
    """Limit of the zero-pair fraction under the arcsine law of Legendre zeros.

    With the zeros distributed like cos(U), U uniform on [0, pi], the pair
    condition cos^2 U + cos^2 V < 1 holds with probability 1/2.
    """
    from scipy.integrate import dblquad

    dens = lambda x: 1.0 / (np.pi * np.sqrt(1.0 - x * x))
    val, _ = dblquad(lambda y, x: dens(x) * dens(y), -1.0, 1.0,
                     lambda x: -np.sqrt(1 - x * x), lambda x: np.sqrt(1 - x * x),
                     epsabs=1e-10, epsrel=1e-10)
    return 2.0 * val


def random_pair_counts(n, trials, rng):
    """Direct counts n(a, b) over ``trials`` independent uniform axis pairs."""
    a = random_sphere_points(trials, rng)
    b = random_sphere_points(trials, rng)
    return np.array([count_common_zeros_direct(a[i], b[i], n).total_sphere for i in range(trials)])


def axes_at_angle(angle):
    """Two unit axes in the xz-plane separated by ``angle``."""
    return PERP_A.copy(), np.array([np.sin(angle), 0.0, np.cos(angle)])
