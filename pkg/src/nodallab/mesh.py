"""Triangulations of the sphere (geodesic icosphere) and the flat torus."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

MAX_SUBDIVISIONS = 8


@dataclass(frozen=True, eq=False)
class TriMesh:
    """A closed triangulated surface.

    ``vertices`` are unit 3-vectors for the sphere and angle pairs (s, t) in
    [0, 2 pi)^2 for the torus.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    kind: str = "sphere"

    @cached_property
    def edges(self):
        """Unique undirected edges, shape ``(E, 2)`` with ``i < j``."""
        e = np.sort(self._directed_edges(), axis=1)
        return np.unique(e, axis=0)

    def _directed_edges(self):
        t = self.triangles
        return np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])

    @cached_property
    def edge_triangles(self):
        """Map from edge ``(i, j)``, i < j, to the list of adjacent triangle indices."""
        out = {}
        e = np.sort(self._directed_edges(), axis=1)
        tri = np.tile(np.arange(len(self.triangles)), 3)
        for (i, j), k in zip(e.tolist(), tri.tolist()):
            out.setdefault((i, j), []).append(k)
        return out

    @property
    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def is_closed_manifold(self):
        """Every edge borders exactly two triangles."""
        e = np.sort(self._directed_edges(), axis=1)
        _, counts = np.unique(e, axis=0, return_counts=True)
        return bool(np.all(counts == 2))

    def is_oriented(self):
        """Each directed edge occurs once, so adjacent triangles induce opposite edge directions."""
        d = self._directed_edges()
        return len(np.unique(d, axis=0)) == len(d)

    def check(self):
        expected = {"sphere": 2, "torus": 0}[self.kind]
        if not (self.is_closed_manifold() and self.is_oriented()):
            raise DomainError("mesh is not a closed oriented surface")
        if self.euler_characteristic != expected:
            raise DomainError(f"Euler characteristic {self.euler_characteristic}, expected {expected}")
        return self

    @cached_property
    def max_edge_length(self):
        v = self.vertices
        e = self.edges
        if self.kind == "sphere":
            d = np.linalg.norm(v[e[:, 0]] - v[e[:, 1]], axis=1)
        else:
            diff = np.abs(v[e[:, 0]] - v[e[:, 1]])
            diff = np.minimum(diff, 2 * np.pi - diff)
            d = np.linalg.norm(diff, axis=1)
        return float(d.max())


def _icosahedron():
    t = (1.0 + 5 ** 0.5) / 2.0
    verts = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    faces = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ], dtype=np.int64)
    return verts / np.linalg.norm(verts, axis=1, keepdims=True), faces


def _subdivide(verts, faces):
    # one new vertex per unique edge, then 1 -> 4 split
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    e_sorted = np.sort(e, axis=1)
    uniq, inverse = np.unique(e_sorted, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    mid = verts[uniq[:, 0]] + verts[uniq[:, 1]]
    mid /= np.linalg.norm(mid, axis=1, keepdims=True)
    new_verts = np.concatenate([verts, mid])
    nf = len(faces)
    ab, bc, ca = (inverse[k * nf:(k + 1) * nf] + len(verts) for k in range(3))
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    new_faces = np.concatenate([
        np.stack([a, ab, ca], axis=1),
        np.stack([b, bc, ab], axis=1),
        np.stack([c, ca, bc], axis=1),
        np.stack([ab, bc, ca], axis=1),
    ])
    return new_verts, new_faces


def icosphere(subdivisions) -> TriMesh:
    """Geodesic sphere: icosahedron, ``subdivisions`` edge-midpoint splits, projected to |x| = 1."""
    if int(subdivisions) != subdivisions or not 0 <= subdivisions <= MAX_SUBDIVISIONS:
        raise DomainError(f"subdivisions must be in 0..{MAX_SUBDIVISIONS}")
    v, f = _icosahedron()
    for _ in range(int(subdivisions)):
        v, f = _subdivide(v, f)
    return TriMesh(v, f, "sphere")


def torus_mesh(resolution) -> TriMesh:
    """The flat torus [0, 2 pi)^2 as a ``resolution`` x ``resolution`` grid, two triangles per cell."""
    r = int(resolution)
    if r < 3:
        raise DomainError("torus resolution must be >= 3")
    g = 2 * np.pi * np.arange(r) / r
    s, t = np.meshgrid(g, g, indexing="ij")
    verts = np.stack([s.ravel(), t.ravel()], axis=1)
    i, j = np.meshgrid(np.arange(r), np.arange(r), indexing="ij")
    idx = lambda a, b: (a % r) * r + (b % r)
    v00, v10, v01, v11 = idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1)
    tris = np.concatenate([
        np.stack([v00.ravel(), v10.ravel(), v11.ravel()], axis=1),
        np.stack([v00.ravel(), v11.ravel(), v01.ravel()], axis=1),
    ])
    return TriMesh(verts, tris, "torus")
