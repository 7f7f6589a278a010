import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from nodallab.errors import DomainError
from nodallab.harmonics import Eigenfunction
from nodallab.orbits import (COUNTEREXAMPLE_LIMIT, WITNESS, HarmonicPoly3, SU2Element,
                             center_circle_residual, codim2_orbit_meets, counterexample_min,
                             hyperplane_gap_oracle, matrix_elements, orbit_gap,
                             orbit_meets_hyperplane, representation_matrix)

# (sqrt(13) - 1) / 6 to 20 digits
LIMIT = 0.43425854591066488219
# E_1 basis order m = -1, 0, 1 is (y, z, x)
PERM = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], float)


def _cvec(rng):
    return rng.standard_normal(2) + 1j * rng.standard_normal(2)


def test_su2_element():
    g = SU2Element.from_quaternion([1, 2, 3, 4])
    det, unit = g.defects()
    assert det < 1e-14 and unit < 1e-14
    with pytest.raises(DomainError):
        SU2Element(1.0, 1.0)


def test_hyperplane_examples(rng):
    c = orbit_meets_hyperplane([1, 0], [0, 1], rng)
    np.testing.assert_allclose(c.element.matrix, np.eye(2))
    assert c.residual == 0.0
    c = orbit_meets_hyperplane([1, 0], [1, 0], rng)
    assert c.residual < 1e-10
    swap = SU2Element(0.0, 1.0)
    assert abs(np.vdot([1, 0], swap([1, 0]))) == 0.0
    with pytest.raises(DomainError):
        orbit_meets_hyperplane([0, 0], [1, 0], rng)


def test_hyperplane_random_suite(rng):
    for _ in range(200):
        v, h = _cvec(rng), _cvec(rng)
        c = orbit_meets_hyperplane(v, h, rng)
        assert c.residual < 1e-10
        assert abs(np.vdot(h, c.element(v))) < 1e-10 * np.linalg.norm(v) * np.linalg.norm(h)
        assert max(c.element.defects()) < 1e-13


def test_closed_form_oracle_is_zero(rng):
    # the 4x2 map always has a null direction, so the minimum is zero
    for _ in range(50):
        assert hyperplane_gap_oracle(_cvec(rng), _cvec(rng)) < 1e-12


def test_center_circle(rng):
    for _ in range(10):
        v = _cvec(rng)
        h = np.array([-np.conj(v[1]), np.conj(v[0])])  # orthogonal to v
        assert center_circle_residual(v, h, rng.uniform(0, 2 * np.pi, 20)) < 1e-14


def test_representation_degree_one(rng):
    for _ in range(5):
        R = Rotation.random(random_state=rng).as_matrix()
        np.testing.assert_allclose(representation_matrix(1, R), PERM @ R @ PERM.T, atol=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_representation_homomorphism(n, rng):
    A, B = (Rotation.random(random_state=rng).as_matrix() for _ in range(2))
    SA, SB, SAB = (representation_matrix(n, M) for M in (A, B, A @ B))
    np.testing.assert_allclose(SA @ SB, SAB, atol=1e-13)
    np.testing.assert_allclose(SA.T @ SA, np.eye(2 * n + 1), atol=1e-13)
    with pytest.raises(DomainError):
        representation_matrix(5, A)


def test_representation_acts_by_rotation(rng):
    R = Rotation.random(random_state=rng).as_matrix()
    f = Eigenfunction.random(3, rng)
    g = Eigenfunction(3, representation_matrix(3, R) @ f.coeffs)
    p = rng.standard_normal((10, 3))
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    np.testing.assert_allclose(g(p), f(p @ R), atol=1e-12)


def test_codim2_e1_orthogonal_triple(rng):
    x, y, z = np.eye(3)
    c = codim2_orbit_meets(x, y, z, rng)
    out = representation_matrix(1, c.element) @ x
    assert abs(out @ y) < 1e-8 and abs(out @ z) < 1e-8
    assert abs(abs(out[0]) - 1) < 1e-8


def test_codim2_random_e2(rng):
    for _ in range(50):
        x, y, z = rng.standard_normal((3, 5))
        c = codim2_orbit_meets(x, y, z, rng)
        R = c.element
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-13) and np.linalg.det(R) > 0
        sx = representation_matrix(2, R) @ x
        scale = np.linalg.norm(x)
        assert abs(sx @ y) < 1e-8 * scale * np.linalg.norm(y)
        assert abs(sx @ z) < 1e-8 * scale * np.linalg.norm(z)
        a, b = matrix_elements(x, y, z, R)
        assert abs(a - sx @ y) < 1e-12 and abs(b - sx @ z) < 1e-12


def test_codim2_bad_inputs(rng):
    with pytest.raises(DomainError):
        codim2_orbit_meets(np.ones(4), np.ones(4), np.ones(4), rng)
    with pytest.raises(DomainError):
        codim2_orbit_meets(np.ones(11), np.ones(11), np.ones(11), rng)


def test_harmonic_poly():
    with pytest.raises(DomainError):
        HarmonicPoly3(np.zeros(3), np.eye(3))
    R = Rotation.from_euler("xyz", [0.3, -1.1, 2.0]).as_matrix()
    x = np.array([0.2, -0.5, 0.7])
    assert WITNESS.rotated(R)(x) == pytest.approx(WITNESS(R.T @ x), abs=1e-14)


def test_counterexample_examples():
    assert float(orbit_gap(np.eye(3))) == 2.0
    R = Rotation.from_euler("y", np.pi / 2).as_matrix()
    assert float(orbit_gap(R)) == pytest.approx(1.0, abs=1e-15)
    assert COUNTEREXAMPLE_LIMIT == pytest.approx(LIMIT, abs=1e-16)
    m = counterexample_min(10 ** 6)
    assert 0.43 <= m <= 0.44 and m >= LIMIT


def test_counterexample_convergence():
    vals = [counterexample_min(10 ** k) for k in range(1, 8)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert all(v >= LIMIT for v in vals)
    assert vals[-1] - LIMIT < 1e-3
    with pytest.raises(DomainError):
        counterexample_min(0)


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_counterexample_monotone_property(r1, r2):
    lo, hi = sorted((r1, r2))
    assert counterexample_min(hi) <= counterexample_min(lo)


def test_counterexample_rotation_grid_agrees(rng):
    # brute force over Haar rotations never beats the 1D bound
    R = Rotation.random(2000, random_state=rng).as_matrix()
    gaps = np.array([orbit_gap(r) for r in R])
    assert gaps.min() >= LIMIT - 1e-15


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1))
def test_hyperplane_property(seed):
    rng = np.random.default_rng(seed)
    v, h = _cvec(rng), _cvec(rng)
    assert orbit_meets_hyperplane(v, h, rng).residual < 1e-10
