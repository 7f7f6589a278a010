"""Gauss-Legendre quadrature and the integral identities on zonal bands.

Surface integrals on S^2 are tensor rules: Gauss in cos(theta) (or in theta
where the integrand is only piecewise smooth in theta) times the trapezoid
rule in phi, which is exact for trigonometric polynomials of degree below
the number of phi nodes.

Sign convention: Delta Y_n^m = -n(n+1) Y_n^m.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi

import numpy as np

from .errors import DomainError
from .harmonics import Eigenfunction, from_angles
from .legendre import legendre_deriv, legendre_eval, legendre_zeros

MAX_ORDER = 200
#: polar ends of bands are pulled in by this much (the pole is a coordinate
#: singularity, not a boundary)
POLE_INSET = 1e-8


@dataclass(frozen=True, eq=False)
class GaussRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def on(self, a, b):
        """Nodes and weights mapped to [a, b]."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights

    def integrate(self, f, a=-1.0, b=1.0):
        x, w = self.on(a, b)
        return float(np.dot(w, f(x)))


@lru_cache(maxsize=None)
def gauss_rule(order) -> GaussRule:
    """Gauss-Legendre rule with ``order`` nodes; w_i = 2 / ((1 - x_i^2) P'(x_i)^2)."""
    if int(order) != order or not 1 <= order <= MAX_ORDER:
        raise DomainError(f"order must be in 1..{MAX_ORDER}")
    x = legendre_zeros(int(order)).zeros.copy()
    dp = legendre_deriv(int(order), x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # same symmetry as the nodes
    w = 0.5 * (w + w[::-1])
    x.flags.writeable = False
    w.flags.writeable = False
    return GaussRule(int(order), x, w)


def phi_nodes(count):
    return np.linspace(0.0, 2 * pi, count, endpoint=False), np.full(count, 2 * pi / count)


def sphere_rule(order, n_phi=None):
    """Points ``(N, 3)`` and weights ``(N,)`` integrating polynomials of degree < min(2 order, n_phi) exactly."""
    n_phi = n_phi or 2 * order
    rule = gauss_rule(order)
    phi, wphi = phi_nodes(n_phi)
    theta = np.arccos(rule.nodes)
    pts = from_angles(theta[:, None], phi[None, :]).reshape(-1, 3)
    w = np.outer(rule.weights, wphi).reshape(-1)
    return pts, w


@dataclass(frozen=True)
class Band:
    """The zonal band theta_lo < theta < theta_hi."""

    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        if not 0.0 <= self.theta_lo < self.theta_hi <= pi:
            raise DomainError(f"bad band ({self.theta_lo}, {self.theta_hi})")


def nodal_bands(n):
    """The n + 1 nodal domains of P_n(cos theta), north to south."""
    theta = np.arccos(legendre_zeros(n).zeros[::-1]) if n > 0 else np.array([])
    edges = np.concatenate(([POLE_INSET], theta, [pi - POLE_INSET]))
    return [Band(float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]


def _band_x(band):
    # integration range in x = cos(theta); at a pole cos(inset) rounds to +-1
    return np.cos(band.theta_hi), np.cos(band.theta_lo)


def dirichlet_band_identity(n, k, order=64):
    """Equality case of D_U(u) >= lambda int_U u^2 for u = P_n(cos theta) on its k-th band.

    Returns ``(lhs, rhs, residual)`` with lhs = D_U(u), rhs = n(n+1) int_U u^2,
    residual = |lhs - rhs| / rhs. Both integrands are polynomials in
    x = cos(theta) of degree 2n, so Gauss with order > n is exact.
    """
    bands = nodal_bands(n)
    if not 1 <= k <= n + 1:
        raise DomainError(f"band index must be in 1..{n + 1}")
    a, b = _band_x(bands[k - 1])
    x, w = gauss_rule(order).on(a, b)
    dp = legendre_deriv(n, x)
    p = legendre_eval(n, x)
    lhs = 2 * pi * np.dot(w, (1 - x * x) * dp * dp)
    rhs = n * (n + 1) * 2 * pi * np.dot(w, p * p)
    return float(lhs), float(rhs), float(abs(lhs - rhs) / rhs)


def band_trial_function(n, k, kind="bump"):
    """A zonal trial function on the k-th band of P_n, as a numpy Polynomial in x.

    ``"bump"`` vanishes on every boundary circle of the band, so it lies in W_0;
    ``"next"`` is P_{n+1} restricted to the band and vanishes on no boundary.
    """
    bands = nodal_bands(n)
    band = bands[k - 1]
    a, b = _band_x(band)
    P = np.polynomial.Polynomial
    if kind == "next":
        return np.polynomial.Legendre.basis(n + 1).convert(kind=P)
    if kind != "bump":
        raise DomainError(f"unknown trial kind {kind!r}")
    poly = P([1.0])
    if k > 1:
        poly = poly * P([-b, 1.0]) * -1.0   # (b - x), b the upper boundary circle
    if k < n + 1:
        poly = poly * P([-a, 1.0])          # (x - a), a the lower boundary circle
    return poly


def dirichlet_band_inequality(n, k, kind="bump", order=64):
    """``(D_U(f), lambda_n int_U f^2)`` for a zonal trial function f on the band."""
    f = band_trial_function(n, k, kind)
    a, b = _band_x(nodal_bands(n)[k - 1])
    x, w = gauss_rule(order).on(a, b)
    df = f.deriv()(x)
    lhs = 2 * pi * np.dot(w, (1 - x * x) * df * df)
    rhs = n * (n + 1) * 2 * pi * np.dot(w, f(x) ** 2)
    return float(lhs), float(rhs)


def _e_theta(theta, phi):
    ct = np.cos(theta)
    return np.stack([ct * np.cos(phi), ct * np.sin(phi), -np.sin(theta) * np.ones_like(phi)], axis=-1)


def _n_phi(*fs):
    return max(32, 2 * sum(f.n for f in fs) + 4)


def green_terms(band: Band, u: Eigenfunction, v: Eigenfunction, order=64):
    """``(boundary, area)`` sides of Green's formula on a zonal band.

    boundary = oint (u dv/dn - v du/dn) ds, with the outward normal +e_theta on
    the southern circle and -e_theta on the northern one;
    area = int (u Delta v - v Delta u) dm.
    """
    n_phi = _n_phi(u, v)
    phi, wphi = phi_nodes(n_phi)
    boundary = 0.0
    for theta, sign in ((band.theta_hi, 1.0), (band.theta_lo, -1.0)):
        pts = from_angles(np.full_like(phi, theta), phi)
        et = _e_theta(theta, phi)
        uv, ug = u.value_and_gradient(pts)
        vv, vg = v.value_and_gradient(pts)
        dv = np.sum(vg * et, axis=-1)
        du = np.sum(ug * et, axis=-1)
        boundary += sign * np.sin(theta) * np.dot(wphi, uv * dv - vv * du)
    a, b = _band_x(band)
    x, wx = gauss_rule(order).on(a, b)
    pts = from_angles(np.arccos(x)[:, None], phi[None, :])
    uv, vv = u(pts), v(pts)
    integrand = uv * v.laplacian(pts) - vv * u.laplacian(pts)
    area = float(wx @ integrand @ wphi)
    return float(boundary), area


def green_residual(band: Band, u: Eigenfunction, v: Eigenfunction, order=64):
    boundary, area = green_terms(band, u, v, order)
    return abs(boundary - area)


def smooth_cutoff(theta, band: Band, width):
    """C^2 cutoff and its theta-derivative: 0 at the band edges, 1 at depth >= ``width``.

    Built from the quintic smoothstep s(t) = 10 t^3 - 15 t^4 + 6 t^5, whose
    first and second derivatives vanish at t = 0 and t = 1.
    """
    if 2 * width > band.theta_hi - band.theta_lo:
        raise DomainError("cutoff width too large for band")
    theta = np.asarray(theta, float)

    def s(t):
        t = np.clip(t, 0.0, 1.0)
        return t ** 3 * (10 - 15 * t + 6 * t * t), 30 * t * t * (1 - t) ** 2

    s_lo, ds_lo = s((theta - band.theta_lo) / width)
    s_hi, ds_hi = s((band.theta_hi - theta) / width)
    chi = s_lo * s_hi
    dchi = (ds_lo * s_hi - s_lo * ds_hi) / width
    return chi, dchi


def bpart_terms(band: Band, u: Eigenfunction, v: Eigenfunction, w: Eigenfunction, width=0.2, order=96):
    """Both sides of int u rho(dv, dw) = -int v (rho(du, dw) + u Delta w) with u cut off near the band edges.

    u is replaced by chi * u, chi from :func:`smooth_cutoff`, which is C^2 with
    compact support in the band. Returns ``(left, right)``.
    """
    n_phi = _n_phi(u, v, w)
    phi, wphi = phi_nodes(n_phi)
    lo, hi = band.theta_lo, band.theta_hi
    rule = gauss_rule(order)
    left = right = 0.0
    for a, b in ((lo, lo + width), (lo + width, hi - width), (hi - width, hi)):
        if b <= a:
            continue
        th, wt = rule.on(a, b)
        wt = wt * np.sin(th)
        T, PH = th[:, None], phi[None, :]
        pts = from_angles(T, PH)
        chi, dchi = smooth_cutoff(T, band, width)
        uu, ug = u.value_and_gradient(pts)
        vv, vg = v.value_and_gradient(pts)
        ww, wg = w.value_and_gradient(pts)
        ut = chi * uu
        utg = chi[..., None] * ug + (uu * dchi)[..., None] * _e_theta(T, PH)
        rho_vw = np.sum(vg * wg, axis=-1)
        rho_uw = np.sum(utg * wg, axis=-1)
        left += wt @ (ut * rho_vw) @ wphi
        right += -(wt @ (vv * (rho_uw + ut * w.laplacian(pts))) @ wphi)
    return float(left), float(right)


def bpart_residual(band, u, v, w, width=0.2, order=96):
    left, right = bpart_terms(band, u, v, w, width, order)
    return abs(left - right)


def dirichlet_ratios(n):
    """D_{S^2}(Y_n^m) / ||Y_n^m||^2 for m = -n..n."""
    order = n + 2
    pts, w = sphere_rule(order, 2 * n + 4)
    out = []
    for m in range(-n, n + 1):
        f = Eigenfunction.basis(n, m)
        val, grad = f.value_and_gradient(pts)
        energy = np.dot(w, np.sum(grad * grad, axis=-1))
        out.append(energy / np.dot(w, val * val))
    return np.array(out)


def eigenvalue_positivity_check(n, rtol=1e-9):
    """True iff D(Y_n^m) = n(n+1) ||Y_n^m||^2 >= 0 for every m, within ``rtol``."""
    ratios = dirichlet_ratios(n)
    lam = n * (n + 1)
    return bool(np.all(ratios >= -rtol) and np.all(np.abs(ratios - lam) <= rtol * max(1.0, lam)))
