"""Orbits meeting linear subspaces: SU(2) on C^2, SO(3) on E_n, and a counterexample.

Group elements are searched by local descent on the group, parametrised by
unit quaternions (S^3 = SU(2), also the double cover of SO(3)). Each restart
runs projected gradient descent with backtracking, then a few Gauss-Newton
steps in the Lie algebra to reach the certification level quickly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DomainError, SearchFailure
from .harmonics import Eigenfunction
from .quad import sphere_rule

RESTARTS = 50
HYPERPLANE_TOL = 1e-10
CODIM2_TOL = 1e-8
MAX_REP_DEGREE = 4
UNIT_TOL = 1e-14


@dataclass(frozen=True)
class SU2Element:
    """The matrix [[a, -conj(b)], [b, conj(a)]] with |a|^2 + |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0) > 1e-12:
            raise DomainError("SU(2) element needs |a|^2 + |b|^2 = 1")

    @classmethod
    def from_quaternion(cls, q):
        q = np.asarray(q, float)
        q = q / np.linalg.norm(q)
        return cls(complex(q[0], q[1]), complex(q[2], q[3]))

    @property
    def quaternion(self):
        return np.array([self.a.real, self.a.imag, self.b.real, self.b.imag])

    @property
    def matrix(self):
        a, b = self.a, self.b
        return np.array([[a, -np.conj(b)], [b, np.conj(a)]])

    def __call__(self, v):
        return self.matrix @ np.asarray(v, complex)

    def defects(self):
        """``(|det - 1|, |g^* g - I|_max)``."""
        m = self.matrix
        return abs(np.linalg.det(m) - 1.0), float(np.max(np.abs(m.conj().T @ m - np.eye(2))))


@dataclass(frozen=True)
class OrbitCertificate:
    element: object
    residual: float
    restarts: int


def _hermitian(x, y):
    return np.vdot(y, x)  # sum x_i conj(y_i)


def _su2_linear_map(v, h):
    """Real 2x4 matrix L with <g(q) v, h> = (L q)[0] + i (L q)[1]."""
    v = np.asarray(v, complex)
    h = np.asarray(h, complex)
    cols = []
    for q in np.eye(4):
        w = SU2Element.from_quaternion(q)(v)
        z = _hermitian(w, h)
        cols.append([z.real, z.imag])
    return np.array(cols).T


def hyperplane_gap_oracle(v, h):
    """min over SU(2) of |<g v, h>|^2 as the smallest eigenvalue of L^T L (closed form)."""
    L = _su2_linear_map(v, h)
    return float(np.linalg.eigvalsh(L.T @ L)[0])


#: sufficient-decrease fraction; a lax value lets reflections through on quadratics
ARMIJO = 0.5


def _sphere_descent(f_grad, q, iters=500, tol=0.0):
    """Projected gradient descent with Armijo backtracking on the unit sphere in R^4."""
    q = q / np.linalg.norm(q)
    fq, g = f_grad(q)
    step = 1.0
    for _ in range(iters):
        g = g - (g @ q) * q
        gn = g @ g
        if fq <= tol or gn == 0.0:
            break
        while True:
            trial = q - step * g
            trial /= np.linalg.norm(trial)
            ft, gt = f_grad(trial)
            if ft <= fq - ARMIJO * step * gn or step < 1e-16:
                break
            step *= 0.5
        q, fq, g = trial, ft, gt
        step = min(2.0 * step, 1e3)
    return q, fq


def orbit_meets_hyperplane(v, h, rng, restarts=RESTARTS, tol=HYPERPLANE_TOL) -> OrbitCertificate:
    """g in SU(2) with <g v, h> = 0, certified |<g v, h>| < tol |v| |h|."""
    v = np.asarray(v, complex)
    h = np.asarray(h, complex)
    scale = np.linalg.norm(v) * np.linalg.norm(h)
    if scale == 0.0:
        raise DomainError("v and h must be nonzero")
    L = _su2_linear_map(v, h) / scale

    def f_grad(q):
        r = L @ q
        return float(r @ r), 2.0 * (L.T @ r)

    best = np.inf
    for k in range(restarts):
        q0 = np.array([1.0, 0.0, 0.0, 0.0]) if k == 0 else rng.standard_normal(4)
        q, _ = _sphere_descent(f_grad, q0, tol=(0.01 * tol) ** 2)
        g = SU2Element.from_quaternion(q)
        res = abs(_hermitian(g(v), h)) / scale
        best = min(best, res)
        if res < tol:
            return OrbitCertificate(g, float(res), k + 1)
    raise SearchFailure(f"no certified element after {restarts} restarts (best {best:.3g})")


def center_circle_residual(v, h, alphas):
    """max over alpha of |<e^{i alpha} v, h>|: zero whenever <v, h> = 0."""
    v = np.asarray(v, complex)
    h = np.asarray(h, complex)
    return max(abs(_hermitian(np.exp(1j * a) * v, h)) for a in alphas)


# SO(3) on E_n

@lru_cache(maxsize=None)
def _rep_rule(n):
    # exact for polynomials of degree 2n on the sphere
    pts, w = sphere_rule(n + 1, 2 * n + 2)
    pts.flags.writeable = False
    w.flags.writeable = False
    return pts, w


def representation_matrix(n, R) -> np.ndarray:
    """Matrix of (sigma(R) f)(p) = f(R^T p) on basis coefficients of E_n, by quadrature projection."""
    if not 0 <= n <= MAX_REP_DEGREE:
        raise DomainError(f"representation degree must be in 0..{MAX_REP_DEGREE}")
    pts, w = _rep_rule(n)
    R = np.asarray(R, float)
    eye = np.eye(2 * n + 1)
    src = np.stack([Eigenfunction(n, e)(pts @ R) for e in eye])   # f_m(R^T p)
    dst = np.stack([Eigenfunction(n, e)(pts) for e in eye])
    return (dst * w) @ src.T


def matrix_elements(x, y, z, R):
    """``(<sigma(R) x, y>, <sigma(R) x, z>)`` computed as surface integrals of f_y f_x(R^T .)."""
    n = (len(x) - 1) // 2
    pts, w = _rep_rule(n)
    fx = Eigenfunction(n, x)(pts @ np.asarray(R, float))
    return float(w @ (Eigenfunction(n, y)(pts) * fx)), float(w @ (Eigenfunction(n, z)(pts) * fx))


def _codim2_residual_and_jacobian(fx, fy, fz, R, pts, w):
    # sigma(R) x evaluated as f_x(R^T p); substituting p = R q gives
    # <sigma(R)x, y> = int f_x(q) f_y(R q) dq. Left perturbation R -> exp(omega) R
    # moves R q with velocity omega x R q.
    Rq = pts @ R.T
    vals = np.array([w @ (fx * fy(Rq)), w @ (fx * fz(Rq))])
    jac = np.empty((2, 3))
    for row, f in enumerate((fy, fz)):
        g = f.gradient(Rq)
        for k, e in enumerate(np.eye(3)):
            jac[row, k] = w @ (fx * np.sum(g * np.cross(e, Rq), axis=1))
    return vals, jac


def codim2_orbit_meets(x, y, z, rng, restarts=RESTARTS, tol=CODIM2_TOL) -> OrbitCertificate:
    """R in SO(3) with sigma(R) x orthogonal to y and z in E_n.

    Descent on F(R) = <sigma(R)x, y>^2 + <sigma(R)x, z>^2 along its Lie-algebra
    gradient with backtracking, finished by Gauss-Newton. Certified when both
    matrix elements are below ``tol`` relative to |x| |y| and |x| |z|.
    """
    x, y, z = (np.asarray(t, float) for t in (x, y, z))
    if not (len(x) == len(y) == len(z)) or len(x) % 2 == 0:
        raise DomainError("x, y, z must be coefficient vectors of one E_n")
    n = (len(x) - 1) // 2
    if not 1 <= n <= MAX_REP_DEGREE:
        raise DomainError(f"degree must be in 1..{MAX_REP_DEGREE}")
    nx_, ny, nz = (np.linalg.norm(t) for t in (x, y, z))
    if min(nx_, ny, nz) == 0.0:
        raise DomainError("x, y, z must be nonzero")
    pts, w = _rep_rule(n)
    q_pts = pts
    fx = Eigenfunction(n, x / nx_)(q_pts)
    fy, fz = Eigenfunction(n, y / ny), Eigenfunction(n, z / nz)

    def objective(R):
        vals, jac = _codim2_residual_and_jacobian(fx, fy, fz, R, q_pts, w)
        return vals, jac

    best = np.inf
    for k in range(restarts):
        R = np.eye(3) if k == 0 else Rotation.random(random_state=rng).as_matrix()
        vals, jac = objective(R)
        step = 1.0
        for _ in range(200):
            F = vals @ vals
            grad = 2.0 * jac.T @ vals
            gn = grad @ grad
            if F < 1e-6 or gn == 0.0:
                break
            while True:
                Rt = Rotation.from_rotvec(-step * grad).as_matrix() @ R
                vt, jt = objective(Rt)
                if vt @ vt <= F - ARMIJO * step * gn or step < 1e-12:
                    break
                step *= 0.5
            R, vals, jac = Rt, vt, jt
            step = min(2.0 * step, 10.0)
        for _ in range(20):
            if np.max(np.abs(vals)) < 1e-3 * tol:
                break
            omega = -np.linalg.lstsq(jac, vals, rcond=None)[0]
            Rt = Rotation.from_rotvec(omega).as_matrix() @ R
            vt, jt = objective(Rt)
            if vt @ vt >= vals @ vals:
                break
            R, vals, jac = Rt, vt, jt
        res = float(np.max(np.abs(vals)))
        best = min(best, res)
        if res < tol:
            # re-orthonormalise the accumulated product
            R = Rotation.from_matrix(R).as_matrix()
            return OrbitCertificate(R, res, k + 1)
    raise SearchFailure(f"no certified rotation after {restarts} restarts (best {best:.3g})")


@dataclass(frozen=True, eq=False)
class HarmonicPoly3:
    """l(x) + q(x) on R^3: ``linear`` a 3-vector, ``quad`` symmetric with zero trace."""

    linear: np.ndarray
    quad: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.quad, float)
        if q.shape != (3, 3) or not np.allclose(q, q.T, rtol=0, atol=1e-15):
            raise DomainError("quad must be a symmetric 3x3 matrix")
        if np.trace(q) != 0.0:
            raise DomainError("quad must be traceless (harmonic)")
        object.__setattr__(self, "linear", np.asarray(self.linear, float))
        object.__setattr__(self, "quad", q)

    def parts(self, x):
        x = np.asarray(x, float)
        return x @ self.linear, np.einsum("...i,ij,...j->...", x, self.quad, x)

    def __call__(self, x):
        l, q = self.parts(x)
        return l + q

    def rotated(self, R):
        """The polynomial x -> f(R^T x)."""
        R = np.asarray(R, float)
        q = R @ self.quad @ R.T
        q = 0.5 * (q + q.T)
        # rounding leaves a trace of order eps; restore exact harmonicity
        q[2, 2] = -(q[0, 0] + q[1, 1])
        return HarmonicPoly3(R @ self.linear, q)


WITNESS = HarmonicPoly3(np.array([0.0, 0.0, 1.0]), np.diag([1.0, 1.0, -2.0]))
WITNESS_POINT = np.array([0.0, 0.0, 1.0])
#: min over t in [-1, 1] of max(|t|, |1 - 3 t^2|): the root of 3 t^2 + t - 1
COUNTEREXAMPLE_LIMIT = (np.sqrt(13.0) - 1.0) / 6.0


def orbit_gap(R, f=WITNESS, x0=WITNESS_POINT):
    """max(|l(x0)|, |q(x0)|) for the rotated polynomial f(R^T .)."""
    l, q = f.parts(np.asarray(R, float).T @ x0)
    return np.maximum(np.abs(l), np.abs(q))


def counterexample_min(resolution, f=WITNESS, x0=WITNESS_POINT, chunk=1 << 18):
    """Grid minimum over the orbit of max(|l(x0)|, |q(x0)|).

    Since (g f)(x0) = f(g^{-1} x0), the gap only depends on y = g^{-1} x0, so
    the SO(3) grid is pulled back to an angle grid on S^2: k values of theta
    (both poles included) times 2(k - 1) of phi, equal spacing pi / (k - 1).
    k runs through 2, 3, 5, 9, ... (k - 1 a power of two) and the largest
    grid with at most ``resolution`` points (the 4-point grid at least) is
    used. Those grids are nested, so the minimum never increases with the
    resolution.
    """
    if resolution < 1:
        raise DomainError("resolution must be positive")
    k = 2
    while (2 * k - 1) * 4 * (k - 1) <= resolution:
        k = 2 * k - 1
    theta = np.linspace(0.0, np.pi, k)
    phi = np.pi * np.arange(2 * (k - 1)) / (k - 1)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    y = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    best = np.inf
    for s in range(0, len(y), chunk):
        l, q = f.parts(y[s:s + chunk])
        best = min(best, float(np.min(np.maximum(np.abs(l), np.abs(q)))))
    return best
