from math import factorial, pi

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import lpmv

from nodallab.errors import DomainError
from nodallab.harmonics import (Eigenfunction, S3Point, basis_values, evaluate, from_angles,
                                is_harmonic_quadratic, laplacian_residual, random_rotation,
                                random_s3, random_sphere_points, s3_harmonicity_check,
                                s3_quadratic_forms, s3_triple, tangent_frame, to_angles,
                                torus_common_zeros, torus_min_norm_sq, zonal_from_axis)
from nodallab.legendre import legendre_eval
from nodallab.quad import sphere_rule

EZ = np.array([0.0, 0.0, 1.0])
EX = np.array([1.0, 0.0, 0.0])

# sqrt(5/(4 pi)) * P_2(0)
Y20_EQUATOR = -0.31539156525252000603


def scipy_real_basis(n, theta, phi):
    # lpmv carries the (-1)^m phase; undo it
    rows = []
    for m in range(-n, n + 1):
        k = abs(m)
        N = np.sqrt((2 * n + 1) / (4 * pi) * factorial(n - k) / factorial(n + k))
        p = (-1) ** k * lpmv(k, n, np.cos(theta))
        if m == 0:
            rows.append(N * p)
        elif m > 0:
            rows.append(np.sqrt(2) * N * p * np.cos(k * phi))
        else:
            rows.append(np.sqrt(2) * N * p * np.sin(k * phi))
    return np.stack(rows, axis=-1)


def test_matches_scipy_basis(rng):
    th, ph = rng.uniform(0, pi, 50), rng.uniform(0, 2 * pi, 50)
    p = from_angles(th, ph)
    for n in range(0, 13):
        np.testing.assert_allclose(basis_values(n, p), scipy_real_basis(n, th, ph), atol=1e-12)


def test_eval_examples(rng):
    assert evaluate(zonal_from_axis(EZ, 1), EZ) == pytest.approx(1.0, abs=1e-15)
    f = Eigenfunction.random(5, rng)
    p = random_sphere_points(10, rng)
    np.testing.assert_allclose(f(-p), -f(p), atol=1e-13)
    assert evaluate(Eigenfunction.basis(2, 0), from_angles(pi / 2, 0.3)) == pytest.approx(Y20_EQUATOR, abs=1e-15)


def test_coefficient_length_enforced():
    with pytest.raises(DomainError):
        Eigenfunction(3, np.zeros(6))


def test_zonal_examples(rng):
    z = zonal_from_axis(EZ, 6)
    assert np.count_nonzero(np.abs(z.coeffs) > 1e-15) == 1 and z.coeffs[6] != 0
    a = random_sphere_points(1, rng)[0]
    assert zonal_from_axis(a, 9)(a) == pytest.approx(1.0, abs=1e-12)
    perp = np.cross(a, EX)
    perp /= np.linalg.norm(perp)
    assert abs(zonal_from_axis(a, 7)(perp)) < 1e-13


def test_addition_theorem_100_cases(rng):
    for _ in range(100):
        n = int(rng.integers(0, 31))
        a, x = random_sphere_points(2, rng)
        assert abs(zonal_from_axis(a, n)(x) - legendre_eval(n, np.clip(a @ x, -1, 1))) < 1e-12


def test_rotation_covariance(rng):
    for _ in range(30):
        n = int(rng.integers(1, 20))
        R = random_rotation(rng)
        a, x = random_sphere_points(2, rng)
        assert abs(zonal_from_axis(R @ a, n)(R @ x) - zonal_from_axis(a, n)(x)) < 1e-12


def test_gram_matrix_is_identity():
    for n in range(0, 16):
        pts, w = sphere_rule(n + 2)
        B = basis_values(n, pts)
        G = (B * w[:, None]).T @ B
        assert np.max(np.abs(G - np.eye(2 * n + 1))) < 1e-10


def test_laplacian_residual_examples():
    assert laplacian_residual(Eigenfunction.basis(0, 0), from_angles(1.0, 0.5)) < 1e-10
    p = from_angles(1.0, 0.4)
    r1 = laplacian_residual(Eigenfunction.basis(5, 3), p, 1e-3)
    r2 = laplacian_residual(Eigenfunction.basis(5, 3), p, 5e-4)
    assert r1 < 1e-4
    assert 3.5 <= r1 / r2 <= 4.5


def test_laplacian_residual_rejects_poles():
    with pytest.raises(DomainError):
        laplacian_residual(Eigenfunction.basis(2, 1), from_angles(0.005, 0.0), 1e-3)


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_laplacian_second_order_all_basis(n):
    p = from_angles(1.1, 0.7)
    for m in range(-n, n + 1):
        f = Eigenfunction.basis(n, m)
        r1, r2 = laplacian_residual(f, p, 2e-3), laplacian_residual(f, p, 1e-3)
        if r1 > 1e-9:
            assert 3.5 <= r1 / r2 <= 4.5


def test_gradient_is_tangent_and_matches_difference(rng):
    f = Eigenfunction.random(6, rng)
    p = random_sphere_points(20, rng)
    g = f.gradient(p)
    assert np.max(np.abs(np.sum(g * p, axis=1))) < 1e-12
    h = 1e-6
    for q, gq in zip(p, g):
        e1, e2 = tangent_frame(q)
        for e in (e1, e2):
            fd = (f(np.cos(h) * q + np.sin(h) * e) - f(np.cos(h) * q - np.sin(h) * e)) / (2 * np.sin(h))
            assert abs(fd - gq @ e) < 1e-6


def test_gradient_regular_at_poles():
    g = Eigenfunction.basis(3, 1).gradient(np.array([EZ, -EZ]))
    assert np.all(np.isfinite(g))


def test_angles_roundtrip(rng):
    p = random_sphere_points(100, rng)
    th, ph = to_angles(p)
    assert np.all((0 <= th) & (th <= pi)) and np.all((0 <= ph) & (ph < 2 * pi))
    np.testing.assert_allclose(from_angles(th, ph), p, atol=1e-14)


def test_rows_roundtrip_bit_identical(rng):
    f = Eigenfunction.random(4, rng)
    assert np.array_equal(Eigenfunction.from_rows(f.to_rows()).coeffs, f.coeffs)
    with pytest.raises(DomainError):
        Eigenfunction.from_rows(f.to_rows()[:-1])


def test_torus_pair():
    assert torus_min_norm_sq() == 1.0
    assert torus_common_zeros() == []
    t = 0.3
    assert -np.cos(t) + np.cos(t) == 0.0


def test_s3_examples(rng):
    assert tuple(map(float, s3_triple(S3Point(1.0, 0.0)))) == (1.0, 0.0, 0.0)
    z1, z2 = random_s3(10 ** 5, rng)
    u, v, w = s3_triple(z1, z2)
    assert np.max(np.abs(u * u + 4 * v * v + 4 * w * w - 1)) < 1e-14
    assert abs(np.min(u * u + v * v + w * w) - 0.25) < 1e-4
    with pytest.raises(DomainError):
        S3Point(1.0, 0.5)


def test_s3_quadratic_forms_reproduce_triple(rng):
    z1, z2 = random_s3(50, rng)
    x = np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=1)
    ref = s3_triple(z1, z2)
    forms = s3_quadratic_forms()
    for key, r in zip("uvw", ref):
        np.testing.assert_allclose(np.einsum("ki,ij,kj->k", x, forms[key], x), r, atol=1e-14)


def test_harmonicity():
    assert s3_harmonicity_check()
    perturbed = s3_quadratic_forms()
    perturbed["u"] = perturbed["u"] + np.diag([1.0, 0, 0, 0])
    assert not s3_harmonicity_check(perturbed)
    assert is_harmonic_quadratic(s3_quadratic_forms()["v"])


@given(st.integers(0, 12), st.integers(0, 2 ** 32 - 1))
def test_linear_in_coefficients(n, seed):
    rng = np.random.default_rng(seed)
    f, g = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
    p = random_sphere_points(5, rng)
    np.testing.assert_allclose((f + 2.0 * g)(p), f(p) + 2 * g(p), atol=1e-12)


@given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1))
def test_parity(n, seed):
    rng = np.random.default_rng(seed)
    f = Eigenfunction.random(n, rng)
    p = random_sphere_points(4, rng)
    np.testing.assert_allclose(f(-p), (-1) ** n * f(p), atol=1e-11)


@given(st.integers(0, 2 ** 32 - 1))
def test_s3_identity_property(seed):
    z1, z2 = random_s3(100, np.random.default_rng(seed))
    u, v, w = s3_triple(z1, z2)
    assert np.max(np.abs(u * u + 4 * v * v + 4 * w * w - 1)) < 1e-14
    assert np.min(u * u + v * v + w * w) >= 0.25 - 1e-15
