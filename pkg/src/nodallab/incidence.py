"""Nodal domains on a mesh and the incidence graph of two families of domains.

Domains are connected components of the graph whose vertices are mesh
vertices with |u| above a dead band and whose edges join same-sign
neighbours. For a pair (u, v) the incidence graph has one node per domain of
either function and an edge between a u-domain and a v-domain whenever they
share a mesh vertex.

Functions may be :class:`Eigenfunction` objects or any callable taking the
``(N, d)`` vertex array (torus functions take angle pairs).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DegenerateError
from .mesh import TriMesh

VERTEX_FLOOR = 1e-9
COVER_FLOOR = 1e-3
DEGENERATE_FRACTION = 0.5


@dataclass(frozen=True, eq=False)
class NodalDomainSet:
    """Domains of one function on a mesh.

    ``labels[i]`` is the domain index of vertex i, or -1 inside the dead band.
    """

    owner: object
    domains: list
    signs: np.ndarray
    labels: np.ndarray
    values: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.domains)

    @property
    def dead(self):
        return np.flatnonzero(self.labels < 0)


@dataclass(frozen=True, eq=False)
class IncidenceGraph:
    """Bipartite graph on the domains of u (nodes ``("U", i)``) and of v (``("V", j)``)."""

    du: NodalDomainSet
    dv: NodalDomainSet
    edges: list

    @property
    def nodes(self):
        return [("U", i) for i in range(len(self.du))] + [("V", j) for j in range(len(self.dv))]

    def to_networkx(self):
        g = nx.Graph()
        for i, s in enumerate(self.du.signs):
            g.add_node(("U", i), family="U", sign=int(s))
        for j, s in enumerate(self.dv.signs):
            g.add_node(("V", j), family="V", sign=int(s))
        g.add_edges_from((("U", i), ("V", j)) for i, j in self.edges)
        return g


@dataclass(frozen=True)
class ProofReport:
    """Conditions on the incidence graph; a and b and the cycle are only judged under covering."""

    disjoint: bool          # (A)
    no_containment: bool    # (B)
    meets_nodal: bool       # every domain meets the other function's nodal set
    covering: bool
    bipartite: bool | None = None   # (a)
    min_degree_two: bool | None = None   # (b)
    cycle: tuple | None = None
    violations: tuple = ()

    @property
    def cycle_length(self):
        return len(self.cycle) if self.cycle else 0


def _values(u, mesh):
    vals = np.asarray(u(mesh.vertices), float)
    if vals.shape != (len(mesh.vertices),):
        raise ValueError("function must return one value per vertex")
    return vals


def nodal_domains(u, mesh: TriMesh, vertex_floor=VERTEX_FLOOR) -> NodalDomainSet:
    """Flood fill over mesh edges joining vertices of the same strict sign.

    Vertices with |u| <= vertex_floor * max|u| belong to no domain.
    """
    vals = _values(u, mesh)
    scale = float(np.max(np.abs(vals)))
    alive = np.abs(vals) > vertex_floor * scale
    if scale == 0.0 or np.mean(~alive) > DEGENERATE_FRACTION:
        raise DegenerateError("more than half the vertices lie in the dead band")
    e = mesh.edges
    sign = np.sign(vals)
    keep = alive[e[:, 0]] & alive[e[:, 1]] & (sign[e[:, 0]] == sign[e[:, 1]])
    e = e[keep]
    nv = len(vals)
    adj = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(nv, nv))
    _, comp = connected_components(adj, directed=False)
    labels = np.full(nv, -1)
    ids = np.unique(comp[alive])
    remap = {c: k for k, c in enumerate(ids)}
    labels[alive] = [remap[c] for c in comp[alive]]
    domains = [np.flatnonzero(labels == k) for k in range(len(ids))]
    signs = np.array([int(sign[d[0]]) for d in domains])
    return NodalDomainSet(u, domains, signs, labels, vals)


def build_incidence(u, v, mesh: TriMesh, vertex_floor=VERTEX_FLOOR) -> IncidenceGraph:
    """Edges (U, V) for every pair of domains sharing a mesh vertex."""
    du = nodal_domains(u, mesh, vertex_floor)
    dv = nodal_domains(v, mesh, vertex_floor)
    both = (du.labels >= 0) & (dv.labels >= 0)
    pairs = np.unique(np.stack([du.labels[both], dv.labels[both]], axis=1), axis=0)
    return IncidenceGraph(du, dv, [tuple(map(int, p)) for p in pairs])


def _pl_common_zero(u3, v3):
    # barycentric null vector of [[u0,u1,u2],[v0,v1,v2]]
    n = np.cross(u3, v3)
    nz = np.abs(n).max(axis=1) > 0
    hit = nz & (np.all(n >= 0, axis=1) | np.all(n <= 0, axis=1))
    # u and v proportional on the triangle: common zeros wherever u vanishes
    par = ~nz
    hit |= par & (u3.min(axis=1) <= 0) & (u3.max(axis=1) >= 0)
    return hit


def covering_witnesses(u, v, mesh: TriMesh, cover_floor=COVER_FLOOR, method="pl"):
    """Where the domains of u and v fail to cover the mesh.

    ``"vertex"``: vertices with both |u| and |v| below cover_floor times the
    respective max norms. ``"pl"`` adds the triangles on which the linear
    interpolants of u and v have a common zero. Returns ``(vertices, triangles)``.
    """
    uv, vv = _values(u, mesh), _values(v, mesh)
    su, sv = np.max(np.abs(uv)), np.max(np.abs(vv))
    verts = np.flatnonzero((np.abs(uv) <= cover_floor * su) & (np.abs(vv) <= cover_floor * sv))
    if method == "vertex":
        return verts, np.empty(0, int)
    if method != "pl":
        raise ValueError(f"unknown covering method {method!r}")
    t = mesh.triangles
    tris = np.flatnonzero(_pl_common_zero(uv[t], vv[t]))
    return verts, tris


def check_covering(u, v, mesh: TriMesh, cover_floor=COVER_FLOOR, method="pl") -> bool:
    """True iff the nodal domains of u and v cover the mesh (no discrete common zero)."""
    verts, tris = covering_witnesses(u, v, mesh, cover_floor, method)
    return len(verts) == 0 and len(tris) == 0


def covering_sensitivity(u, v, mesh: TriMesh, floors=(1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1)):
    """Rows ``(floor, vertex witnesses, pl verdict)`` across cover floors."""
    rows = []
    for f in floors:
        verts, tris = covering_witnesses(u, v, mesh, f, "pl")
        rows.append((float(f), int(len(verts)), len(verts) == 0 and len(tris) == 0))
    return rows


def shortest_cycle(graph: nx.Graph):
    """Shortest cycle through some edge: for each edge, BFS between its ends with the edge removed."""
    best = None
    for a, b in sorted(graph.edges):
        graph.remove_edge(a, b)
        try:
            path = nx.shortest_path(graph, b, a)
        except nx.NetworkXNoPath:
            path = None
        graph.add_edge(a, b)
        if path is not None and (best is None or len(path) < len(best)):
            best = tuple(path)
    return best


def _meets_nodal(dset: NodalDomainSet, other_vals, floor):
    # a domain meets N_w if w vanishes on one of its vertices or takes both signs there
    out = []
    for d in dset.domains:
        w = other_vals[d]
        out.append(bool(np.any(np.abs(w) <= floor) or (w.min() < 0 < w.max())))
    return out


def check_proof_conditions(g: IncidenceGraph, covering: bool) -> ProofReport:
    """Evaluate (A), (B) and the nodal-meeting condition; under covering also (a), (b) and a cycle."""
    du, dv = g.du, g.dv
    bad = []
    disjoint = True
    for fam, ds in (("U", du), ("V", dv)):
        seen = np.zeros(len(ds.labels), int)
        for d in ds.domains:
            seen[d] += 1
        if np.any(seen > 1):
            disjoint = False
            bad.append(f"{fam} domains overlap")
    sets_u = [set(d.tolist()) for d in du.domains]
    sets_v = [set(d.tolist()) for d in dv.domains]
    no_cont = True
    for i, j in g.edges:
        if sets_u[i] <= sets_v[j] or sets_v[j] <= sets_u[i]:
            no_cont = False
            bad.append(f"containment between U{i} and V{j}")
    fu = VERTEX_FLOOR * np.max(np.abs(dv.values))
    fv = VERTEX_FLOOR * np.max(np.abs(du.values))
    mu = _meets_nodal(du, dv.values, fu)
    mv = _meets_nodal(dv, du.values, fv)
    bad += [f"U{i} misses N_v" for i, ok in enumerate(mu) if not ok]
    bad += [f"V{j} misses N_u" for j, ok in enumerate(mv) if not ok]
    meets = all(mu) and all(mv)
    if not covering:
        return ProofReport(disjoint, no_cont, meets, False, violations=tuple(bad))
    graph = g.to_networkx()
    bip = all(graph.nodes[a]["family"] != graph.nodes[b]["family"] for a, b in graph.edges)
    deg = all(d >= 2 for _, d in graph.degree)
    if not bip:
        bad.append("edge inside one family")
    if not deg:
        bad.append("node of degree < 2")
    cyc = shortest_cycle(graph)
    if cyc is None:
        bad.append("no cycle")
    return ProofReport(disjoint, no_cont, meets, True, bip, deg, cyc, tuple(bad))
