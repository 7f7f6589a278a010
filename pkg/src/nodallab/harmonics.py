"""Eigenfunctions of the Laplace-Beltrami operator on the model manifolds.

On S^2 the eigenspace E_n (eigenvalue n(n+1)) is represented by coefficients
over the real L^2-orthonormal basis

    Y_n^m = Qbar_n^|m|(z) * Re((x + i y)^m)      m >= 0
    Y_n^m = Qbar_n^|m|(z) * Im((x + i y)^|m|)    m < 0

where ``Qbar_n^k = N_n^k d^k P_n / dz^k`` carries the normalisation. Since
``Re((x+iy)^k) = sin^k(theta) cos(k phi)`` this is the usual real basis built
from P_n^k (no Condon-Shortley phase), but written as a product of
polynomials it stays regular at the poles, for values and for gradients.

Point arrays have shape ``(..., 3)``; a single point ``(3,)`` gives a scalar.
The circle pair and the S^3 triple from the no-common-zero examples live
here too.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lgamma, log, pi

import numpy as np

from .errors import DomainError


# --------------------------------------------------------------------------
# points
# --------------------------------------------------------------------------

def from_angles(theta, phi):
    """Unit vectors for polar angle ``theta`` and azimuth ``phi``."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def to_angles(p):
    """Return ``(theta, phi)`` with theta in [0, pi] and phi in [0, 2 pi)."""
    p = np.asarray(p, float)
    theta = np.arccos(np.clip(p[..., 2] / np.linalg.norm(p, axis=-1), -1.0, 1.0))
    phi = np.mod(np.arctan2(p[..., 1], p[..., 0]), 2 * pi)
    return theta, phi


def normalize(p):
    p = np.asarray(p, float)
    return p / np.linalg.norm(p, axis=-1, keepdims=True)


def random_sphere_points(k, rng):
    return normalize(rng.standard_normal((k, 3)))


def random_rotation(rng):
    """Haar-random rotation matrix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def tangent_frame(p):
    """Orthonormal tangent vectors ``(e1, e2)`` at unit points ``p``."""
    p = np.asarray(p, float)
    helper = np.where(np.abs(p[..., :1]) < 0.9, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    e1 = normalize(np.cross(p, helper))
    e2 = np.cross(p, e1)
    return e1, e2


# --------------------------------------------------------------------------
# real spherical-harmonic basis
# --------------------------------------------------------------------------

def _diag_constant(m):
    # N_m^m (2m-1)!!; of moderate size for every m
    v = 0.5 * log((2 * m + 1) / (4 * pi)) + 0.5 * lgamma(2 * m + 1) - m * log(2.0) - lgamma(m + 1)
    if m > 0:
        v += 0.5 * log(2.0)
    return np.exp(v)


@lru_cache(maxsize=None)
def _recurrence_tables(n):
    k = np.arange(n + 1, dtype=float)
    diag = np.array([_diag_constant(int(j)) for j in range(n + 1)])
    a = np.zeros((n + 1, n + 1))
    b = np.zeros((n + 1, n + 1))
    for l in range(1, n + 1):
        kk = k[:l]
        a[l, :l] = np.sqrt((4.0 * l * l - 1) / (l * l - kk * kk))
        if l > 1:
            bb = ((l - 1.0) ** 2 - kk * kk) * (2 * l + 1) / ((2 * l - 3) * (l * l - kk * kk))
            b[l, :l] = np.sqrt(np.clip(bb, 0.0, None))
    dq = np.sqrt((n - k) * (n + k + 1.0))
    dq[0] /= np.sqrt(2.0)
    for t in (diag, a, b, dq):
        t.flags.writeable = False
    return diag, a, b, dq


def _qbar(n, z):
    """Qbar_n^k(z) for k = 0..n, shape ``(n + 2,) + z.shape`` (row n+1 is zero).

    Upward recurrence in the degree l, run for all orders k < l at once.
    """
    diag, a, b, _ = _recurrence_tables(n)
    cur = np.zeros((n + 2,) + z.shape)
    cur[: n + 1] = diag.reshape((-1,) + (1,) * z.ndim)
    prev = np.zeros_like(cur)
    for l in range(1, n + 1):
        al = a[l, :l].reshape((-1,) + (1,) * z.ndim)
        bl = b[l, :l].reshape((-1,) + (1,) * z.ndim)
        nxt = al * z * cur[:l] - bl * prev[:l]
        prev[:l] = cur[:l]
        cur[:l] = nxt
    return cur


def _basis(n, points, with_grad):
    p = np.asarray(points, float)
    z = p[..., 2]
    w = p[..., 0] + 1j * p[..., 1]
    qb = _qbar(n, z)
    shape = (-1,) + (1,) * z.ndim
    k = np.arange(n + 1)
    W = w[None] ** k.reshape(shape)
    q = qb[: n + 1]
    # rows: m = -n..-1 from Im, m = 0..n from Re
    vals = np.concatenate([(q[1:] * W[1:].imag)[::-1], q * W.real])
    vals = np.moveaxis(vals, 0, -1)
    if not with_grad:
        return vals, None
    dq = _recurrence_tables(n)[3].reshape(shape) * qb[1:]
    W1 = np.zeros_like(W)
    W1[1:] = k[1:].reshape(shape) * W[:-1]
    g_pos = np.stack([q * W1.real, -q * W1.imag, dq * W.real], axis=-1)
    g_neg = np.stack([q * W1.imag, q * W1.real, dq * W.imag], axis=-1)
    grads = np.concatenate([g_neg[1:][::-1], g_pos])
    grads = np.moveaxis(grads, 0, -2)
    radial = np.einsum("...mj,...j->...m", grads, p)
    grads = grads - radial[..., None] * p[..., None, :]
    return vals, grads


def basis_values(n, points):
    """Real orthonormal Y_n^m at ``points``; last axis indexes m = -n..n."""
    return _basis(int(n), points, False)[0]


def basis_gradients(n, points):
    """Tangential gradients of the basis, shape ``(..., 2n+1, 3)``."""
    return _basis(int(n), points, True)[1]


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    """A member of E_n given by coefficients over Y_n^m, m = -n..n."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (2 * self.n + 1,):
            raise DomainError(f"E_{self.n} needs {2 * self.n + 1} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def eigenvalue(self):
        return self.n * (self.n + 1)

    @property
    def norm(self):
        """L^2(S^2) norm, equal to the coefficient 2-norm."""
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, points):
        vals = basis_values(self.n, points) @ self.coeffs
        return float(vals) if np.ndim(vals) == 0 else vals

    def gradient(self, points):
        """Tangential gradient on S^2."""
        return np.einsum("...mj,m->...j", basis_gradients(self.n, points), self.coeffs)

    def value_and_gradient(self, points):
        v, g = _basis(self.n, points, True)
        return v @ self.coeffs, np.einsum("...mj,m->...j", g, self.coeffs)

    def laplacian(self, points):
        return -self.eigenvalue * self(points)

    def __neg__(self):
        return Eigenfunction(self.n, -self.coeffs)

    def __add__(self, other):
        if other.n != self.n:
            raise DomainError("cannot add eigenfunctions of different degree")
        return Eigenfunction(self.n, self.coeffs + other.coeffs)

    def __mul__(self, c):
        return Eigenfunction(self.n, float(c) * self.coeffs)

    __rmul__ = __mul__

    @classmethod
    def basis(cls, n, m):
        if abs(m) > n:
            raise DomainError(f"|m| must be <= n, got m={m}, n={n}")
        c = np.zeros(2 * n + 1)
        c[n + m] = 1.0
        return cls(n, c)

    @classmethod
    def random(cls, n, rng):
        """Gaussian coefficients: the rotation-invariant random ensemble on E_n."""
        return cls(n, rng.standard_normal(2 * n + 1))

    def to_rows(self):
        return [(self.n, m, float(c)) for m, c in zip(range(-self.n, self.n + 1), self.coeffs)]

    @classmethod
    def from_rows(cls, rows):
        rows = [(int(n), int(m), float(c)) for n, m, c in rows]
        degrees = {r[0] for r in rows}
        if len(degrees) != 1:
            raise DomainError("rows mix several degrees")
        n = degrees.pop()
        coeffs = np.zeros(2 * n + 1)
        seen = set()
        for _, m, c in rows:
            if abs(m) > n or m in seen:
                raise DomainError(f"bad or repeated order m={m}")
            seen.add(m)
            coeffs[n + m] = c
        if len(seen) != 2 * n + 1:
            raise DomainError("missing orders")
        return cls(n, coeffs)


def evaluate(f: Eigenfunction, p):
    """``f(p)``."""
    return f(p)


def zonal_from_axis(a, n) -> Eigenfunction:
    """The zonal harmonic x -> P_n(<x, a>) expanded in the real basis.

    By the addition theorem ``P_n(<x,a>) = 4 pi / (2n+1) sum_m Y_n^m(a) Y_n^m(x)``.
    """
    a = normalize(a)
    return Eigenfunction(n, 4 * pi / (2 * n + 1) * basis_values(n, a))


def laplacian_residual(f: Eigenfunction, p, h=1e-3):
    """|Delta_h f + n(n+1) f| at ``p`` with a second-order stencil in (theta, phi).

    Delta_h discretises (1/sin t) d_t(sin t d_t) + (1/sin^2 t) d_pp with central
    differences of step ``h``; the residual is O(h^2).
    """
    theta, phi = to_angles(p)
    theta, phi = float(theta), float(phi)
    if theta < 10 * h or theta > pi - 10 * h:
        raise DomainError("finite-difference Laplacian needs theta at least 10h from the poles")
    grid = from_angles(
        np.array([theta, theta + h, theta - h, theta, theta]),
        np.array([phi, phi, phi, phi + h, phi - h]),
    )
    f0, ftp, ftm, fpp, fpm = f(grid)
    st = np.sin(theta)
    d_theta = (np.sin(theta + h / 2) * (ftp - f0) - np.sin(theta - h / 2) * (f0 - ftm)) / (h * h * st)
    d_phi = (fpp - 2 * f0 + fpm) / (h * h * st * st)
    return abs(d_theta + d_phi + f.eigenvalue * f0)


# --------------------------------------------------------------------------
# the circle: a pair in E_1 without common zeros
# --------------------------------------------------------------------------

def torus_u(t):
    return np.cos(t)


def torus_v(t):
    return np.sin(t)


def torus_pair():
    """``(cos, sin)`` on R / 2 pi Z, both in the eigenspace with lambda = 1."""
    return torus_u, torus_v


def torus_min_norm_sq(samples=4096):
    """Grid minimum of u^2 + v^2 on the circle.

    Evaluated in extended precision and rounded once to double: in plain
    double arithmetic cos^2 + sin^2 lands an ulp or two below 1 at some nodes.
    """
    t = np.linspace(0.0, 2 * pi, samples, endpoint=False).astype(np.longdouble)
    return float(np.min(np.cos(t) ** 2 + np.sin(t) ** 2))


def torus_common_zeros(samples=4096, tol=1e-8):
    """Common zeros of the circle pair: bisect sign changes of u, keep those where v vanishes."""
    from scipy.optimize import brentq

    t = np.linspace(0.0, 2 * pi, samples + 1)
    u = torus_u(t)
    found = []
    for i in np.flatnonzero(np.sign(u[:-1]) != np.sign(u[1:])):
        r = brentq(torus_u, t[i], t[i + 1], xtol=1e-15)
        if abs(torus_v(r)) < tol:
            found.append(r)
    return found


def torus_surface_u(st):
    """cos(s) on the flat torus, pulled back from the circle along s."""
    return np.cos(np.asarray(st)[..., 0])


def torus_surface_v(st):
    return np.sin(np.asarray(st)[..., 0])


# --------------------------------------------------------------------------
# S^3 in C^2: three eigenfunctions without a common zero
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class S3Point:
    z1: complex
    z2: complex

    def __post_init__(self):
        if abs(abs(self.z1) ** 2 + abs(self.z2) ** 2 - 1.0) > 1e-14:
            raise DomainError("S3Point needs |z1|^2 + |z2|^2 = 1")


def random_s3(k, rng):
    """``(z1, z2)`` arrays uniformly distributed on S^3."""
    g = rng.standard_normal((k, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3]


def s3_triple(z1, z2=None):
    """``(|z1|^2 - |z2|^2, Re z1 conj(z2), Im z1 conj(z2))``.

    Accepts an :class:`S3Point` or two (arrays of) complex numbers.
    """
    if isinstance(z1, S3Point):
        z1, z2 = z1.z1, z1.z2
    z1 = np.asarray(z1, complex)
    z2 = np.asarray(z2, complex)
    prod = z1 * np.conj(z2)
    u = np.abs(z1) ** 2 - np.abs(z2) ** 2
    return u, prod.real, prod.imag


def s3_quadratic_forms():
    """Symmetric 4x4 matrices of u, v, w in the real coordinates (x1, x2, x3, x4), z1 = x1 + i x2, z2 = x3 + i x4."""
    u = np.diag([1.0, 1.0, -1.0, -1.0])
    v = np.zeros((4, 4))
    v[0, 2] = v[2, 0] = v[1, 3] = v[3, 1] = 0.5           # x1 x3 + x2 x4
    w = np.zeros((4, 4))
    w[1, 2] = w[2, 1] = 0.5                               # x2 x3 - x1 x4
    w[0, 3] = w[3, 0] = -0.5
    return {"u": u, "v": v, "w": w}


def is_harmonic_quadratic(form, tol=0.0):
    """A quadratic form x^T A x is harmonic on R^d iff trace(A) = 0."""
    form = np.asarray(form, float)
    return bool(np.allclose(form, form.T) and abs(np.trace(form)) <= tol)


def s3_harmonicity_check(forms=None):
    """True iff every quadratic form has zero Euclidean Laplacian (so all lie in one eigenspace on S^3)."""
    forms = s3_quadratic_forms() if forms is None else forms
    return all(is_harmonic_quadratic(f) for f in forms.values())
