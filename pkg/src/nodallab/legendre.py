"""Legendre polynomials, associated Legendre functions and Legendre zeros.

Everything here is evaluated by three-term recurrences in the degree, which
are stable in the forward direction on [-1, 1]. Functions accept scalars or
numpy arrays for ``x`` and return the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

MAX_DEGREE = 500

#: Newton iteration cap and step tolerance for zero refinement.
NEWTON_MAXITER = 40
NEWTON_STEP_TOL = 1e-15
#: Target residual |P_n(x_k)|. Above n ~ 120 no double is that close to the
#: root (|P_n'| * ulp exceeds it), so the acceptance test also allows a few
#: ulps of the conditioning-limited residual.
ZERO_RESIDUAL_TOL = 1e-13


def _as_domain(x, closed=True):
    x = np.asarray(x, dtype=float)
    bad = np.abs(x) > 1.0 if closed else np.abs(x) >= 1.0
    if np.any(bad):
        raise DomainError(f"x must lie in {'[-1, 1]' if closed else '(-1, 1)'}")
    return x


def _check_degree(n):
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    if n > MAX_DEGREE:
        raise DomainError(f"degree {n} above supported cap {MAX_DEGREE}")
    return int(n)


def _legendre_pair(n, x):
    """Return (P_n(x), P_{n-1}(x)) by upward recurrence; P_{-1} := 0."""
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p, p_prev


def _scalarize(value, like):
    return float(value) if np.ndim(like) == 0 else value


def legendre_eval(n, x):
    """Legendre polynomial P_n(x) normalised by P_n(1) = 1.

    >>> legendre_eval(3, 0.5)
    -0.4375
    """
    n = _check_degree(n)
    xa = _as_domain(x)
    p, _ = _legendre_pair(n, xa)
    return _scalarize(p, x)


def legendre_deriv(n, x):
    """dP_n/dx on the open interval, from (1 - x^2) P_n' = n (P_{n-1} - x P_n)."""
    n = _check_degree(n)
    xa = _as_domain(x, closed=False)
    p, p_prev = _legendre_pair(n, xa)
    d = n * (p_prev - xa * p) / (1.0 - xa * xa)
    return _scalarize(d, x)


@dataclass(frozen=True, eq=False)
class LegendreZeros:
    """The n simple zeros of P_n, ascending."""

    n: int
    zeros: np.ndarray

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]

    def residuals(self):
        p, _ = _legendre_pair(self.n, self.zeros)
        return np.abs(p)


def _accept_tolerance(n, x, dp):
    return np.maximum(ZERO_RESIDUAL_TOL, 4.0 * np.spacing(np.abs(x)) * np.abs(dp) + 4 * n * np.finfo(float).eps)


def _newton(n, x):
    converged = np.zeros(x.shape, dtype=bool)
    for _ in range(NEWTON_MAXITER):
        p, p_prev = _legendre_pair(n, x)
        dp = n * (p_prev - x * p) / (1.0 - x * x)
        step = p / dp
        x = np.where(converged, x, x - step)
        converged |= np.abs(step) < NEWTON_STEP_TOL
        if converged.all():
            break
    p, p_prev = _legendre_pair(n, x)
    dp = n * (p_prev - x * p) / (1.0 - x * x)
    ok = np.abs(p) <= _accept_tolerance(n, x, dp)
    return x, ok


def legendre_zeros(n) -> LegendreZeros:
    """All zeros of P_n, Newton-refined from Chebyshev-angle starting guesses.

    Roots on which Newton fails to settle are re-bracketed between the starting
    guesses of the neighbouring indices and solved with Brent's method.
    """
    n = _check_degree(n)
    if n < 1:
        raise DomainError("legendre_zeros needs n >= 1")
    i = np.arange(1, n + 1)
    guesses = np.cos(np.pi * (4 * i - 1) / (4 * n + 2))  # descending
    x, ok = _newton(n, guesses.copy())
    if not ok.all():
        padded = np.concatenate(([1.0], guesses, [-1.0]))
        for j in np.flatnonzero(~ok):
            lo, hi = padded[j + 2], padded[j]
            f = lambda t: _legendre_pair(n, np.asarray(t))[0]
            try:
                root = brentq(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps)
            except ValueError as exc:
                raise ConvergenceError(f"no bracket for zero {j} of P_{n}") from exc
            polished, good = _newton(n, np.array([root]))
            if not good[0]:
                raise ConvergenceError(f"zero {j} of P_{n} did not converge")
            x[j] = polished[0]
    x = np.sort(x)
    # Exact antisymmetry; the middle zero of odd degree is 0.
    x = 0.5 * (x - x[::-1])
    return LegendreZeros(n, x)


def assoc_legendre_eval(n, k, x):
    """Associated Legendre function P_n^k(x) without the Condon-Shortley phase.

    P_n^k(x) = (1 - x^2)^{k/2} d^k P_n / dx^k, so every P_n^k is non-negative
    just below x = 1.
    """
    n = _check_degree(n)
    if int(k) != k or not 0 <= k <= n:
        raise DomainError(f"order must satisfy 0 <= k <= n, got k={k}, n={n}")
    k = int(k)
    xa = _as_domain(x)
    s = np.sqrt(np.clip(1.0 - xa * xa, 0.0, None))
    # P_k^k = (2k-1)!! s^k
    pkk = np.ones_like(xa)
    for j in range(1, k + 1):
        pkk = pkk * (2 * j - 1) * s
    if n == k:
        return _scalarize(pkk, x)
    p_prev, p = pkk, (2 * k + 1) * xa * pkk
    for l in range(k + 1, n):
        p_prev, p = p, ((2 * l + 1) * xa * p - (l + k) * p_prev) / (l - k + 1)
    return _scalarize(p, x)
