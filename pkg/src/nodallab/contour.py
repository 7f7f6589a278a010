"""Nodal contours on S^2, common zeros along them, and the contour measure |grad u| ds.

Mesh contours are found by marching triangles, projected onto the nodal set
by Newton steps along the gradient, and optionally re-sampled by arc length:
the level set is integrated as the ODE  p' = p x grad u / |grad u|  once
around, and the closed curve is sampled at equal arc-length spacing. For a
smooth periodic arc-length parametrisation the trapezoid rule is spectrally
accurate, which is what the orthogonality integrals need; the raw polyline
only gives second order.

Tolerances that compare function values are relative to the L^2 norm of the
function (the coefficient 2-norm), so they mean the same thing for all
coefficient scalings.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .circles import NodalCircle
from .errors import ConvergenceError, CriticalLevelError, TheoremViolation
from .harmonics import Eigenfunction, normalize, tangent_frame, zonal_from_axis
from .mesh import TriMesh

GRAD_FLOOR = 1e-6
VERTEX_FLOOR = 1e-9
#: required |u| on refined contour vertices
CONTOUR_TOL = 1e-9
#: certified common zeros: max(|u|, |v|) below this
CERTIFY_TOL = 1e-8
#: |v| below this on >= INFINITE_FRACTION of a contour flags an infinite common zero set (heuristic)
INFINITE_VALUE = 1e-12
INFINITE_FRACTION = 0.9
BISECTION_STEPS = 20
NEWTON2D_STEPS = 8


@dataclass(frozen=True, eq=False)
class SphereContour:
    """Polyline on S^2 along a nodal component of ``owner``.

    Closed unless the nodal set was cut at a critical point (see
    :func:`trace_nodal_arcs`).

    ``weights[i]`` is the arc-length quadrature weight of vertex i, so
    ``sum(weights * f(vertices))`` approximates the line integral of f.
    """

    vertices: np.ndarray
    owner: Eigenfunction
    weights: np.ndarray
    smooth: bool = False
    closed: bool = True

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self):
        return float(self.weights.sum())

    @property
    def max_residual(self):
        return float(np.max(np.abs(self.owner(self.vertices))))

    def integrate(self, values):
        return float(np.dot(self.weights, values))


@dataclass(frozen=True, eq=False)
class ContourMeasure:
    """The density q = |grad u| (= |du/dn| on the nodal set) at the contour vertices."""

    contour: SphereContour
    q: np.ndarray


@dataclass(frozen=True, eq=False)
class SignChanges:
    count: int
    points: np.ndarray
    residuals: np.ndarray
    infinite: bool = False


@dataclass(frozen=True, eq=False)
class CommonZeros:
    """Outcome of a common-zero search: certified points and contours flagged infinite."""

    points: np.ndarray
    residuals: np.ndarray
    contours: list = field(repr=False)
    per_contour: list = field(repr=False)
    infinite_contours: list = field(default_factory=list)


def _polyline_weights(p):
    seg = np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)
    return 0.5 * (seg + np.roll(seg, 1))


def trace_zonal_contour(c: NodalCircle, samples=256, owner=None) -> SphereContour:
    """An exact nodal circle at equally spaced parameter values.

    The owner defaults to the zonal harmonic the circle came from.
    """
    if samples < 16:
        raise ValueError("need at least 16 samples")
    if owner is None:
        if c.degree is None:
            raise ValueError("circle has no degree; pass owner")
        owner = zonal_from_axis(c.axis, c.degree)
    pts = c.sample(samples)
    w = np.full(samples, 2 * np.pi * c.radius / samples)
    return SphereContour(pts, owner, w, smooth=True)


def project_to_nodal(u: Eigenfunction, p, tol=CONTOUR_TOL, grad_floor=GRAD_FLOOR, maxiter=30):
    """Newton steps p <- p - u grad u / |grad u|^2 (renormalised) until |u| is at rounding level."""
    p = normalize(np.atleast_2d(p))
    scale = u.norm
    target = 1e-15 * scale
    for _ in range(maxiter):
        val, grad = u.value_and_gradient(p)
        g2 = np.sum(grad * grad, axis=-1)
        if np.any(g2 < (grad_floor * scale) ** 2):
            raise CriticalLevelError("gradient below floor during nodal projection")
        if np.all(np.abs(val) <= target):
            break
        step = np.where(np.abs(val)[:, None] > target, (val / g2)[:, None] * grad, 0.0)
        p = normalize(p - step)
    val = np.abs(u(p))
    if np.any(val > tol * scale):
        raise CriticalLevelError(f"nodal projection stalled at |u| = {val.max():.3g}")
    return p


def _crossing_loops(values, triangles):
    """Marching triangles on vertex signs; returns loops as lists of (i, j) vertex pairs."""
    pos = values > 0
    tri = triangles
    sides = np.stack([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]], axis=1)  # (T, 3, 2)
    flat = np.sort(sides.reshape(-1, 2), axis=1)
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    inv = inv.reshape(-1, 3)
    cross = pos[sides[..., 0]] != pos[sides[..., 1]]
    mixed = np.flatnonzero(cross.any(axis=1))
    nbr = {}
    for t in mixed:
        e1, e2 = inv[t][cross[t]]
        nbr.setdefault(int(e1), []).append(int(e2))
        nbr.setdefault(int(e2), []).append(int(e1))
    loops = []
    seen = set()
    for start in nbr:
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        prev, cur = start, nbr[start][0]
        while cur != start:
            loop.append(cur)
            seen.add(cur)
            a, b = nbr[cur]
            prev, cur = cur, (b if a == prev else a)
        loops.append(uniq[loop])
    return loops


def _densify(u, p, times):
    for _ in range(times):
        mid = project_to_nodal(u, p + np.roll(p, -1, axis=0))
        out = np.empty((2 * len(p), 3))
        out[0::2], out[1::2] = p, mid
        p = out
    return p


def _jump_segments(u, p, min_cos=0.8):
    """Segments not running along the level set: signs of two nodal branches merged by the mesh."""
    g = u.gradient(p)
    t = normalize(np.cross(p, g))
    chord = np.roll(p, -1, axis=0) - p
    size = np.linalg.norm(chord, axis=1)
    # repeated vertices (a crossing exactly at a mesh vertex) are not jumps
    cos = np.abs(np.sum(t * chord, axis=1)) / np.where(size > 0, size, 1.0)
    return (cos < min_cos) & (size > 0)


def trace_contours_mesh(u: Eigenfunction, mesh: TriMesh, refine=1, smooth=False,
                        vertex_floor=VERTEX_FLOOR, grad_floor=GRAD_FLOOR):
    """Closed nodal contours of ``u`` from the sign pattern on ``mesh``.

    Each edge crossing is placed by linear interpolation and Newton-projected
    onto u = 0; ``refine`` rounds of projected midpoint insertion follow.
    Where two branches pass closer than the mesh resolves, marching triangles
    can splice them into one loop; such loops are detected by segments that
    cut across the level set and are re-derived by integrating the level-set
    ODE from their vertices. With ``smooth`` every contour comes from that
    integration and is sampled at equal arc length.
    """
    v = mesh.vertices
    vals, grads = u.value_and_gradient(v)
    scale = u.norm
    flat = (np.abs(vals) < vertex_floor * scale) & (np.linalg.norm(grads, axis=1) < grad_floor * scale)
    if flat.any():
        raise CriticalLevelError("mesh vertex at a critical point on the zero level")
    good, pool, pool_length = [], [], 0.0
    for pairs in _crossing_loops(vals, mesh.triangles):
        i, j = pairs[:, 0], pairs[:, 1]
        t = vals[i] / (vals[i] - vals[j])
        p = (1 - t)[:, None] * v[i] + t[:, None] * v[j]
        p = project_to_nodal(u, p, grad_floor=grad_floor)
        p = _densify(u, p, refine)
        w = _polyline_weights(p)
        if smooth or _jump_segments(u, p).any():
            pool.append(p)
            pool_length += w.sum()
        else:
            good.append(SphereContour(p, u, w))
    if pool:
        spacing = mesh.max_edge_length / 2 ** refine
        good.extend(_retrace(u, np.concatenate(pool), pool_length, spacing, smooth))
    return good


def _retrace(u, pool, total_length, spacing, smooth):
    from scipy.spatial import cKDTree

    out = []
    remaining = pool
    while len(remaining):
        curve, length = trace_level_curve(u, remaining[0], 1.5 * total_length + 1.0, 2 * spacing)
        fine = max(64, int(np.ceil(16 * length / spacing)))
        dense = curve(length * np.arange(fine) / fine)
        dist, _ = cKDTree(dense).query(remaining)
        remaining = remaining[dist > 0.75 * length / fine]
        if smooth:
            out.append(_equal_arc_samples(u, curve, length))
        else:
            samples = max(16, int(np.ceil(length / spacing)))
            s = length * np.arange(samples) / samples
            pts = project_to_nodal(u, curve(s))
            out.append(SphereContour(pts, u, np.full(samples, length / samples), smooth=True))
    return out


#: sample-count doubling stops once q-weighted moments agree to this (relative)
SMOOTH_MOMENT_TOL = 1e-13
MAX_SMOOTH_SAMPLES = 1 << 17


def _moments(u, pts, length):
    # q-weighted moments of degree <= 2 of the coordinates: neutral convergence probes
    q = np.linalg.norm(u.gradient(pts), axis=1)
    x, y, z = pts.T
    feats = np.stack([np.ones_like(x), x, y, z, x * y, y * z, z * x, x * x - y * y, z * z])
    return feats @ q * (length / len(pts))


def _equal_arc_samples(u, curve, length, samples=None):
    """Equal arc-length samples; the count doubles until trapezoid moments settle.

    The trapezoid rule on a closed analytic curve converges geometrically, with
    a rate set by how close the curve passes to a singularity in complex arc
    length. Sharp turns near an almost-critical level need many more samples
    than the degree alone suggests.
    """
    if samples is not None:
        s = length * np.arange(samples) / samples
        return SphereContour(project_to_nodal(u, curve(s)), u, np.full(samples, length / samples), smooth=True)
    m = max(128, int(np.ceil(24 * max(u.n, 1) * length)))
    s = length * np.arange(m) / m
    pts = project_to_nodal(u, curve(s))
    prev = _moments(u, pts, length)
    while m < MAX_SMOOTH_SAMPLES:
        # the doubled rule reuses the current nodes
        s_mid = s + 0.5 * length / m
        mid = project_to_nodal(u, curve(s_mid))
        both = np.empty((2 * m, 3))
        both[0::2], both[1::2] = pts, mid
        s = length * np.arange(2 * m) / (2 * m)
        pts, m = both, 2 * m
        cur = _moments(u, pts, length)
        if np.max(np.abs(cur - prev)) <= SMOOTH_MOMENT_TOL * max(1.0, np.max(np.abs(cur))):
            break
        prev = cur
    return SphereContour(pts, u, np.full(m, length / m), smooth=True)


def trace_level_curve(u: Eigenfunction, p0, max_length, min_length=0.0, rtol=1e-12, chunk=2.0):
    """Follow the nodal line of u through p0 by arc length until it closes.

    Integrates p' = p x grad u / |grad u| (plus a pull-back onto |p| = 1 and
    u = 0) with DOP853. Returns ``(curve, length)`` where ``curve(s)`` gives
    points, shape ``(len(s), 3)``, for 0 <= s <= length.
    """
    p0 = normalize(np.asarray(p0, float))

    def rhs(s, p):
        val, g = u.value_and_gradient(p)
        gn2 = g @ g
        return np.cross(p, g) / np.sqrt(gn2) - 10.0 * val * g / gn2 - 5.0 * (p @ p - 1.0) * p

    radius = max(min_length, 1e-3)

    def closing(s, p):
        # d/ds |p - p0|^2 / 2, live only near the start and after leaving it
        if s < min_length or np.linalg.norm(p - p0) > radius:
            return -1.0
        return (p - p0) @ rhs(s, p)

    closing.direction = 1.0
    pieces = []
    s0, y0 = 0.0, p0
    while s0 < max_length:
        s1 = min(s0 + chunk, max_length)
        sol = solve_ivp(rhs, (s0, s1), y0, method="DOP853", rtol=rtol, atol=rtol,
                        dense_output=True, events=closing)
        if not sol.success:
            raise ConvergenceError(f"level-set integration failed: {sol.message}")
        pieces.append((s0, s1, sol.sol))
        hits = [t for t, y in zip(sol.t_events[0], sol.y_events[0]) if np.linalg.norm(y - p0) < 1e-7]
        if hits:
            length = float(hits[0])
            break
        s0, y0 = s1, sol.y[:, -1]
    else:
        raise ConvergenceError("nodal line did not close within the length budget")

    starts = np.array([a for a, _, _ in pieces])

    def curve(s):
        s = np.atleast_1d(np.asarray(s, float))
        k = np.clip(np.searchsorted(starts, s, side="right") - 1, 0, len(pieces) - 1)
        out = np.empty((len(s), 3))
        for j in np.unique(k):
            sel = k == j
            out[sel] = pieces[j][2](s[sel]).T
        return out

    return curve, length


def smooth_contour(c: SphereContour, samples=None, rtol=1e-12) -> SphereContour:
    """Re-sample a closed contour at equal arc length by integrating along the level set."""
    u = c.owner
    spacing = float(np.max(c.weights))
    curve, length = trace_level_curve(u, c.vertices[0], 1.5 * c.length + 1.0, 4 * spacing, rtol)
    return _equal_arc_samples(u, curve, length, samples)


def contour_measure(c: SphereContour, grad_floor=GRAD_FLOOR) -> ContourMeasure:
    q = np.linalg.norm(c.owner.gradient(c.vertices), axis=1)
    if q.min() < grad_floor * c.owner.norm:
        raise CriticalLevelError("contour passes near a critical point of its owner")
    return ContourMeasure(c, q)


def ortho_integral(u: Eigenfunction, c: SphereContour, v: Eigenfunction, grad_floor=GRAD_FLOOR):
    """Line integral of v |grad u| over a nodal contour of u (vanishes for v in the same eigenspace)."""
    if c.owner is not u and not np.array_equal(c.owner.coeffs, u.coeffs):
        raise ValueError("contour does not belong to u")
    m = contour_measure(c, grad_floor)
    return c.integrate(v(c.vertices) * m.q)


def certify_common_zero(u: Eigenfunction, v: Eigenfunction, p, steps=NEWTON2D_STEPS):
    """Newton on (u, v) in the tangent plane at p; returns ``(point, max(|u|, |v|))``."""
    p = normalize(np.asarray(p, float))
    floor = 1e-15 * max(u.norm, v.norm)
    for _ in range(steps):
        uv, ug = u.value_and_gradient(p)
        vv, vg = v.value_and_gradient(p)
        if max(abs(uv), abs(vv)) <= floor:
            break
        e1, e2 = tangent_frame(p)
        jac = np.array([[ug @ e1, ug @ e2], [vg @ e1, vg @ e2]])
        try:
            c = np.linalg.solve(jac, [-uv, -vv])
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(c)) or np.hypot(*c) > 0.1:
            break
        p = normalize(p + c[0] * e1 + c[1] * e2)
    return p, max(abs(u(p)), abs(v(p)))


def sign_changes_along(v: Eigenfunction, c: SphereContour, certify_tol=CERTIFY_TOL) -> SignChanges:
    """Sign changes of v around the closed contour c, each refined to a certified common zero.

    Brackets are bisected along the polyline with every trial point projected
    back onto the owner's nodal set, then finished by 2D Newton on (u, v).
    """
    u = c.owner
    p = c.vertices
    vals = v(p)
    if np.mean(np.abs(vals) < INFINITE_VALUE * v.norm) >= INFINITE_FRACTION:
        return SignChanges(0, np.empty((0, 3)), np.empty(0), infinite=True)
    pos = vals > 0
    idx = np.flatnonzero(pos != np.roll(pos, -1))
    if not c.closed:
        idx = idx[idx < len(p) - 1]
    if len(idx) == 0:
        return SignChanges(0, np.empty((0, 3)), np.empty(0))
    a = p[idx]
    b = p[(idx + 1) % len(p)]
    sa = pos[idx]
    lo = np.zeros(len(idx))
    hi = np.ones(len(idx))
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        q = project_to_nodal(u, (1 - mid)[:, None] * a + mid[:, None] * b)
        same = (v(q) > 0) == sa
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    mid = 0.5 * (lo + hi)
    q = project_to_nodal(u, (1 - mid)[:, None] * a + mid[:, None] * b)
    pts, res = [], []
    for start in q:
        z, r = certify_common_zero(u, v, start)
        if r < certify_tol:
            pts.append(z)
            res.append(r)
    return SignChanges(len(idx), np.array(pts).reshape(-1, 3), np.array(res))


def _project_lenient(u, p, max_step, maxiter=30):
    """Newton projection that marks failures instead of raising; returns ``(p, ok)``."""
    p = normalize(np.atleast_2d(p))
    scale = u.norm
    ok = np.ones(len(p), bool)
    for _ in range(maxiter):
        val, grad = u.value_and_gradient(p)
        g2 = np.sum(grad * grad, axis=-1)
        ok &= g2 > (GRAD_FLOOR * scale) ** 2
        step = np.where(ok[:, None], (val / np.where(ok, g2, 1.0))[:, None] * grad, 0.0)
        ok &= np.linalg.norm(step, axis=1) < max_step
        p = normalize(p - np.where(ok[:, None], step, 0.0))
    ok &= np.abs(u(p)) < CONTOUR_TOL * scale
    return p, ok


def trace_nodal_arcs(u: Eigenfunction, mesh: TriMesh, split_frac=0.2):
    """Nodal set of u cut into arcs at (near-)critical points on the zero level.

    For u with 0 a critical value the nodal set is a graph, not a union of
    circles. Mesh contour vertices whose gradient is below ``split_frac``
    times the contour's median gradient (or where projection fails) are
    dropped, and the remaining runs become open arcs. Loops that lose no
    vertex stay closed.
    """
    v = mesh.vertices
    vals = u(v)
    h = mesh.max_edge_length
    out = []
    for pairs in _crossing_loops(vals, mesh.triangles):
        i, j = pairs[:, 0], pairs[:, 1]
        t = vals[i] / (vals[i] - vals[j])
        p = (1 - t)[:, None] * v[i] + t[:, None] * v[j]
        p, ok = _project_lenient(u, p, h)
        g = np.linalg.norm(u.gradient(p), axis=1)
        ok &= g >= split_frac * np.median(g[ok]) if ok.any() else ok
        if ok.all():
            out.append(SphereContour(p, u, _polyline_weights(p)))
            continue
        shift = int(np.flatnonzero(~ok)[0])
        p, ok = np.roll(p, -shift, axis=0), np.roll(ok, -shift)
        edges = np.flatnonzero(np.diff(np.concatenate(([0], ok.astype(int), [0]))))
        for a, b in zip(edges[0::2], edges[1::2]):
            if b - a < 3:
                continue
            arc = p[a:b]
            seg = np.linalg.norm(np.diff(arc, axis=0), axis=1)
            w = np.zeros(len(arc))
            w[:-1] += 0.5 * seg
            w[1:] += 0.5 * seg
            out.append(SphereContour(arc, u, w, closed=False))
    return out


def _dedupe(points, residuals, tol=1e-7):
    keep = []
    for i, p in enumerate(points):
        if all(np.linalg.norm(p - points[j]) > tol for j in keep):
            keep.append(i)
    return points[keep], residuals[keep]


def common_zero_search(u: Eigenfunction, v: Eigenfunction, mesh: TriMesh, refine=1,
                       on_critical="arcs") -> CommonZeros:
    """Common zeros of u and v: sign changes of v along every nodal contour of u.

    If 0 is a critical value of u (the contours cannot be traced as smooth
    loops) the search falls back to :func:`trace_nodal_arcs`, or re-raises
    with ``on_critical="raise"``. An empty result
    without any contour flagged infinite raises :class:`TheoremViolation`; on
    S^2 a common zero always exists.
    """
    try:
        contours = trace_contours_mesh(u, mesh, refine=refine)
    except (CriticalLevelError, ConvergenceError):
        if on_critical == "raise":
            raise
        contours = trace_nodal_arcs(u, mesh)
    per = [sign_changes_along(v, c) for c in contours]
    infinite = [i for i, r in enumerate(per) if r.infinite]
    pts = np.concatenate([r.points for r in per]) if per else np.empty((0, 3))
    res = np.concatenate([r.residuals for r in per]) if per else np.empty(0)
    pts, res = _dedupe(pts, res)
    if len(pts) == 0 and not infinite:
        raise TheoremViolation("no common zero found on the sphere")
    return CommonZeros(pts, res, contours, per, infinite)


def match_points(found, expected, tol=1e-6):
    """True iff the two point sets coincide up to ``tol`` (a bijection by nearest neighbours)."""
    found = np.asarray(found).reshape(-1, 3)
    expected = np.asarray(expected).reshape(-1, 3)
    if len(found) != len(expected):
        return False
    if len(found) == 0:
        return True
    d = np.linalg.norm(found[:, None, :] - expected[None, :, :], axis=-1)
    return bool(np.all(d.min(axis=1) < tol) and np.all(d.min(axis=0) < tol))


def parallel_circle_pair(n, k):
    """u = Y_n^k, v = Y_n^-k: both are P_n^k(cos theta) times cos / sin(k phi), so they share
    the circles where d^k P_n / dx^k vanishes."""
    return Eigenfunction.basis(n, k), Eigenfunction.basis(n, -k)


def parallel_circle_heights(n, k):
    """Heights z of the shared circles of :func:`parallel_circle_pair`."""
    roots = np.polynomial.Legendre.basis(n).deriv(k).roots()
    return np.sort(roots.real[np.abs(roots.imag) < 1e-12])
