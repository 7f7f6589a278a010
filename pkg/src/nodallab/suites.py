"""Named verification suites run by ``nodallab verify``.

Each suite returns a list of :class:`Check` rows; a suite passes when every
row does. Sizes come from the run configuration so the same code serves
quick smoke runs and the full desk-scale sweep.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import circles, contour, harmonics, incidence, orbits, quad
from .errors import NodalLabError
from .harmonics import Eigenfunction
from .mesh import icosphere, torus_mesh


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'}\t{self.suite}\t{self.name}\t{self.detail}"


def _rng(cfg, salt):
    # independent, reproducible stream per suite
    return np.random.default_rng([cfg.seed, salt])


def suite_ortho(cfg):
    rng = _rng(cfg, 1)
    out = []
    tol = cfg.tol_ortho
    worst = 0.0
    for n in range(1, 21):
        a = harmonics.random_sphere_points(1, rng)[0]
        for c in circles.nodal_circles(a, n):
            C = contour.trace_zonal_contour(c, 256)
            for m in range(-n, n + 1):
                worst = max(worst, abs(contour.ortho_integral(C.owner, C, Eigenfunction.basis(n, m))))
    out.append(Check("ortho", "zonal n<=20", worst < 1e-8, f"max {worst:.3g}"))
    mesh = icosphere(min(cfg.subdivisions, 4))
    worst = 0.0
    for n in range(1, cfg.n_max + 1):
        u = Eigenfunction.random(n, rng)
        for C in contour.trace_contours_mesh(u, mesh, smooth=True):
            for m in range(-n, n + 1):
                worst = max(worst, abs(contour.ortho_integral(u, C, Eigenfunction.basis(n, m))))
    out.append(Check("ortho", f"random mesh n<={cfg.n_max}", worst < tol, f"max {worst:.3g}"))
    return out


def suite_dirichlet(cfg):
    worst = max(quad.dirichlet_band_identity(n, k)[2] for n in range(1, 21) for k in range(1, n + 2))
    out = [Check("dirichlet", "band equality n<=20", worst < 1e-10, f"max residual {worst:.3g}")]
    ratios = [l / r for n in range(1, 11) for k in range(1, n + 2)
              for l, r in [quad.dirichlet_band_inequality(n, k, "next")]]
    out.append(Check("dirichlet", "strict inequality for P_{n+1}", min(ratios) > 1.0,
                     f"min ratio {min(ratios):.6g}"))
    ok = all(quad.eigenvalue_positivity_check(n) for n in range(0, 11))
    out.append(Check("dirichlet", "eigenvalue positivity n<=10", ok))
    return out


def random_band(rng):
    lo, hi = np.sort(rng.uniform(0.05, np.pi - 0.05, 2))
    if hi - lo < 0.1:
        hi = min(np.pi - 0.01, lo + 0.1)
    return quad.Band(float(lo), float(hi))


def suite_green(cfg):
    rng = _rng(cfg, 2)
    worst = 0.0
    for _ in range(50):
        band = random_band(rng)
        n1, n2 = rng.integers(0, 9, 2)
        r = quad.green_residual(band, Eigenfunction.random(int(n1), rng), Eigenfunction.random(int(n2), rng))
        worst = max(worst, r)
    out = [Check("green", "50 random configurations", worst < 1e-10, f"max {worst:.3g}")]
    worst = 0.0
    for _ in range(5):
        band = quad.Band(0.4, 2.4)
        u, v, w = (Eigenfunction.random(int(k), rng) for k in rng.integers(1, 6, 3))
        worst = max(worst, quad.bpart_residual(band, u, v, w))
    out.append(Check("green", "integration by parts", worst < 1e-8, f"max {worst:.3g}"))
    return out


def suite_theorem(cfg):
    rng = _rng(cfg, 3)
    mesh = icosphere(cfg.subdivisions)
    fails, worst, odd = 0, 0.0, 0
    for k in range(cfg.trials):
        n = 1 + k % cfg.n_max
        u, v = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
        try:
            r = contour.common_zero_search(u, v, mesh)
        except NodalLabError:
            fails += 1
            continue
        if len(r.points) == 0:
            fails += 1
            continue
        worst = max(worst, float(np.max(np.maximum(np.abs(u(r.points)), np.abs(v(r.points))))))
        odd += sum(p.count % 2 for p in r.per_contour)
    out = [Check("theorem", f"{cfg.trials} random pairs have a common zero", fails == 0 and worst < cfg.tol_certify,
                 f"failures {fails}, max residual {worst:.3g}")]
    out.append(Check("theorem", "sign changes even on every contour", odd == 0, f"odd {odd}"))
    return out


def suite_torus(cfg):
    m = harmonics.torus_min_norm_sq()
    out = [Check("torus", "min u^2+v^2 = 1", m == 1.0, f"min(u^2+v^2)={m!r}")]
    out.append(Check("torus", "no common zero", len(harmonics.torus_common_zeros()) == 0))
    tm = torus_mesh(64)
    cov = incidence.check_covering(harmonics.torus_surface_u, harmonics.torus_surface_v, tm)
    g = incidence.build_incidence(harmonics.torus_surface_u, harmonics.torus_surface_v, tm)
    rep = incidence.check_proof_conditions(g, cov)
    out.append(Check("torus", "covering with 4-cycle", cov and rep.bipartite and rep.min_degree_two
                     and rep.cycle_length == 4, f"cycle length {rep.cycle_length}"))
    return out


def suite_s3(cfg):
    rng = _rng(cfg, 4)
    z1, z2 = harmonics.random_s3(100_000, rng)
    u, v, w = harmonics.s3_triple(z1, z2)
    ident = float(np.max(np.abs(u * u + 4 * v * v + 4 * w * w - 1.0)))
    low = float(np.min(u * u + v * v + w * w))
    return [
        Check("s3", "u^2+4v^2+4w^2 = 1", ident < 1e-14, f"max dev {ident:.3g}"),
        Check("s3", "min u^2+v^2+w^2 near 1/4", 0.2499 <= low <= 0.2501, f"min {low:.6f}"),
        Check("s3", "harmonic quadratic forms", harmonics.s3_harmonicity_check()),
    ]


def suite_orbits(cfg):
    rng = _rng(cfg, 5)
    out = []
    worst, fails = 0.0, 0
    for _ in range(200):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        try:
            worst = max(worst, orbits.orbit_meets_hyperplane(v, h, rng).residual)
        except NodalLabError:
            fails += 1
    out.append(Check("orbits", "200 hyperplane instances", fails == 0 and worst < 1e-10, f"max {worst:.3g}"))
    worst, fails = 0.0, 0
    for _ in range(50):
        x, y, z = rng.standard_normal((3, 5))
        try:
            worst = max(worst, orbits.codim2_orbit_meets(x, y, z, rng).residual)
        except NodalLabError:
            fails += 1
    out.append(Check("orbits", "50 codimension-2 instances in E_2", fails == 0 and worst < 1e-8, f"max {worst:.3g}"))
    m = orbits.counterexample_min(10 ** 6)
    out.append(Check("orbits", "counterexample gap stays positive", 0.43 <= m <= 0.44, f"min {m:.6f}"))
    return out


def suite_incidence(cfg):
    rng = _rng(cfg, 6)
    mesh = icosphere(cfg.subdivisions)
    bad = [n for n in range(0, 11)
           if len(incidence.nodal_domains(harmonics.zonal_from_axis(
               harmonics.random_sphere_points(1, rng)[0], n), mesh)) != n + 1]
    out = [Check("incidence", "zonal n+1 domains n<=10", not bad, f"bad degrees {bad}")]
    covered, cont = 0, 0
    for k in range(cfg.trials):
        n = 1 + k % cfg.n_max
        u, v = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
        covered += incidence.check_covering(u, v, mesh, cfg.tol_cover)
        rep = incidence.check_proof_conditions(incidence.build_incidence(u, v, mesh), False)
        cont += not (rep.no_containment and rep.meets_nodal and rep.disjoint)
    out.append(Check("incidence", "sphere pairs never cover", covered == 0, f"covering {covered}"))
    out.append(Check("incidence", "(A), (B) and nodal meeting", cont == 0, f"violations {cont}"))
    n_dom = len(incidence.nodal_domains(harmonics.torus_surface_u, torus_mesh(64)))
    out.append(Check("incidence", "torus cos s has 2 domains", n_dom == 2, f"domains {n_dom}"))
    return out


SUITES = {
    "ortho": suite_ortho,
    "dirichlet": suite_dirichlet,
    "green": suite_green,
    "theorem": suite_theorem,
    "torus": suite_torus,
    "s3": suite_s3,
    "orbits": suite_orbits,
    "incidence": suite_incidence,
}


def threads():
    try:
        return max(1, int(os.environ.get("NODALLAB_THREADS", "1")))
    except ValueError:
        return 1


def run(names, cfg):
    """Run the named suites and return their checks in canonical (suite order, check order) order."""
    names = list(SUITES) if "all" in names else list(names)
    fns = [SUITES[n] for n in names]
    if threads() > 1:
        with ThreadPoolExecutor(max_workers=threads()) as ex:
            results = list(ex.map(lambda f: f(cfg), fns))
    else:
        results = [f(cfg) for f in fns]
    return [c for r in results for c in r]
