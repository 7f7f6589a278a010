import numpy as np
import pytest

from nodallab.errors import DomainError
from nodallab.mesh import icosphere, torus_mesh


def test_icosahedron():
    m = icosphere(0).check()
    assert len(m.vertices) == 12 and len(m.triangles) == 20 and m.euler_characteristic == 2


@pytest.mark.parametrize("k", range(0, 6))
def test_icosphere_levels(k):
    m = icosphere(k).check()
    assert len(m.triangles) == 20 * 4 ** k
    assert len(m.vertices) == 10 * 4 ** k + 2
    assert np.max(np.abs(np.linalg.norm(m.vertices, axis=1) - 1)) < 1e-15


def test_icosphere_orientation_outward():
    m = icosphere(2)
    v = m.vertices[m.triangles]
    normal = np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
    assert np.all(np.sum(normal * v.mean(axis=1), axis=1) > 0)


def test_icosphere_cap():
    with pytest.raises(DomainError):
        icosphere(9)
    with pytest.raises(DomainError):
        icosphere(-1)


def test_edge_length_halves():
    a, b = icosphere(3).max_edge_length, icosphere(4).max_edge_length
    assert 0.45 < b / a < 0.55


@pytest.mark.parametrize("r", [3, 8, 64])
def test_torus(r):
    m = torus_mesh(r).check()
    assert m.euler_characteristic == 0
    assert len(m.triangles) == 2 * r * r


def test_edge_triangles_two_each():
    m = icosphere(2)
    assert all(len(t) == 2 for t in m.edge_triangles.values())
    assert len(m.edge_triangles) == len(m.edges)
