"""End-to-end acceptance checks, one per criterion.

Each check prints a single ``PASS``/``FAIL`` line (collected again in the
pytest terminal summary) and then asserts. Run directly with
``python tests/test_acceptance.py`` for just the report.
"""
import sys
import time

import numpy as np
import pytest

from nodallab import circles, contour, harmonics, incidence, orbits, quad
from nodallab.harmonics import Eigenfunction, random_sphere_points, zonal_from_axis
from nodallab.mesh import icosphere, torus_mesh

SEED = 0xC0FFEE
REPORT = []


def report(k, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {k:>2}  {title}: {detail}"
    REPORT.append(line)
    print(line)
    return ok


def rng_for(k):
    return np.random.default_rng([SEED, k])


@pytest.fixture(scope="module")
def mesh5():
    return icosphere(5)


def criterion_1(mesh5):
    rng = rng_for(1)
    t0 = time.perf_counter()
    violations, worst, fewest = 0, 0.0, np.inf
    for k in range(100):
        n = 1 + k % 8
        u, v = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
        try:
            r = contour.common_zero_search(u, v, mesh5)
        except contour.TheoremViolation:
            violations += 1
            continue
        fewest = min(fewest, len(r.points))
        worst = max(worst, float(np.max(np.maximum(np.abs(u(r.points)), np.abs(v(r.points))))))
    dt = time.perf_counter() - t0
    ok = violations == 0 and fewest >= 1 and worst < 1e-8 and dt < 180
    return report(1, "common zeros of 100 random pairs", ok,
                  f"violations {violations}, min points {fewest}, max residual {worst:.2e}, {dt:.1f} s")


def criterion_2():
    t0 = time.perf_counter()
    m = harmonics.torus_min_norm_sq()
    tm = torus_mesh(64)
    u, v = harmonics.torus_surface_u, harmonics.torus_surface_v
    cov = incidence.check_covering(u, v, tm)
    rep = incidence.check_proof_conditions(incidence.build_incidence(u, v, tm), cov)
    dt = time.perf_counter() - t0
    ok = m == 1.0 and cov and rep.bipartite and rep.min_degree_two and rep.cycle_length == 4 and dt < 1.0
    return report(2, "torus pair", ok,
                  f"min(u^2+v^2)={m!r}, covering {cov}, (a) {rep.bipartite}, (b) {rep.min_degree_two}, "
                  f"cycle {rep.cycle_length}, {dt:.3f} s")


def criterion_3():
    rng = rng_for(3)
    c1 = circles.random_pair_counts(1, 1000, rng)
    c2 = circles.random_pair_counts(2, 1000, rng)
    a, b = circles.axes_at_angle(1e-3)
    close = [circles.count_common_zeros_direct(a, b, n).total_sphere == 2 * n for n in range(1, 51)]
    ok = bool(np.all(c1 == 2) and c2.min() == 4 and c2.max() == 8 and np.all((c2 >= 4) & (c2 <= 8)) and all(close))
    values = sorted(set(c2.tolist()))
    return report(3, "counting claims", ok,
                  f"n=1 counts {sorted(set(c1.tolist()))}, n=2 counts {values}, close axes 2n for {sum(close)}/50")


def criterion_4():
    rng = rng_for(4)
    t0 = time.perf_counter()
    mismatch = 0
    for _ in range(200):
        a, b = random_sphere_points(2, rng)
        n = int(rng.integers(1, 31))
        mismatch += circles.chord_model_count(a, b, n).total_sphere != circles.count_common_zeros_direct(a, b, n).total_sphere
    dt = time.perf_counter() - t0
    return report(4, "chord model equals direct count", mismatch == 0 and dt < 30,
                  f"mismatches {mismatch}/200, {dt:.2f} s")


def criterion_5():
    rows = circles.asymptotic_c_sweep([50, 100, 200, 400])
    ratios = [r.ratio for r in rows]
    diffs = [abs(x - y) for x, y in zip(ratios, ratios[1:])]
    c_fit, _ = circles.extrapolate_c([100, 200, 300, 400])
    ok = max(diffs) < 0.05
    return report(5, "asymptotic constant", ok,
                  "ratios " + ", ".join(f"{r.n}:{r.ratio:.6f}" for r in rows)
                  + f", empirical c = {ratios[-1]:.6f} (fit limit {c_fit:.6f}, arcsine law {circles.arcsine_limit_c():.6f})")


def criterion_6():
    rng = rng_for(6)
    zonal = 0.0
    for n in range(1, 21):
        a = random_sphere_points(1, rng)[0]
        for c in circles.nodal_circles(a, n):
            C = contour.trace_zonal_contour(c, 256)
            for m in range(-n, n + 1):
                zonal = max(zonal, abs(contour.ortho_integral(C.owner, C, Eigenfunction.basis(n, m))))
    mesh = icosphere(4)
    meshed = 0.0
    for n in range(1, 9):
        u = Eigenfunction.random(n, rng)
        for C in contour.trace_contours_mesh(u, mesh, smooth=True):
            for m in range(-n, n + 1):
                meshed = max(meshed, abs(contour.ortho_integral(u, C, Eigenfunction.basis(n, m))))
    ok = zonal < 1e-8 and meshed < 1e-6
    return report(6, "contour orthogonality", ok, f"zonal n<=20 max {zonal:.2e}, mesh n<=8 max {meshed:.2e}")


def criterion_7(mesh5):
    rng = rng_for(7)
    bad, contours_seen = 0, 0
    for k in range(40):
        n = 1 + k % 8
        u, v = Eigenfunction.random(n, rng), Eigenfunction.random(n, rng)
        r = contour.common_zero_search(u, v, mesh5)
        for p in r.per_contour:
            contours_seen += 1
            bad += p.infinite or p.count < 2 or p.count % 2 or len(p.points) != p.count
    u, v = contour.parallel_circle_pair(2, 1)
    r = contour.common_zero_search(u, v, mesh5)
    flagged = [r.contours[i] for i in r.infinite_contours]
    on_equator = bool(flagged) and all(np.max(np.abs(c.vertices[:, 2])) < 1e-8 for c in flagged)
    poles = contour.match_points(r.points, np.array([[0, 0, 1.0], [0, 0, -1.0]]), 1e-6)
    ok = bad == 0 and on_equator and poles
    return report(7, "even count >= 2 per contour", ok,
                  f"{contours_seen} contours, bad {bad}; xz/yz: {len(flagged)} equator arcs flagged infinite, "
                  f"poles certified {poles}")


def criterion_8():
    t0 = time.perf_counter()
    band = max(quad.dirichlet_band_identity(n, k)[2] for n in range(1, 21) for k in range(1, n + 2))
    rng = rng_for(8)
    green = 0.0
    for _ in range(50):
        lo, hi = np.sort(rng.uniform(0.05, np.pi - 0.05, 2))
        if hi - lo < 0.1:
            hi = min(np.pi - 0.01, lo + 0.1)
        n1, n2 = rng.integers(0, 9, 2)
        green = max(green, quad.green_residual(quad.Band(float(lo), float(hi)), Eigenfunction.random(int(n1), rng),
                                               Eigenfunction.random(int(n2), rng)))
    dt = time.perf_counter() - t0
    ok = band < 1e-10 and green < 1e-10 and dt < 30
    return report(8, "band energy identity and Green formula", ok,
                  f"band residual {band:.2e}, Green residual {green:.2e}, {dt:.2f} s")


def criterion_9():
    rng = rng_for(9)
    z1, z2 = harmonics.random_s3(10 ** 5, rng)
    u, v, w = harmonics.s3_triple(z1, z2)
    ident = float(np.max(np.abs(u * u + 4 * v * v + 4 * w * w - 1)))
    low = float(np.min(u * u + v * v + w * w))
    harm = harmonics.s3_harmonicity_check()
    ok = ident < 1e-14 and 0.2499 <= low <= 0.2501 and harm
    return report(9, "S^3 triple", ok, f"identity dev {ident:.2e}, min {low:.6f}, harmonic {harm}")


def criterion_10():
    rng = rng_for(10)
    hyper = max(orbits.orbit_meets_hyperplane(rng.standard_normal(2) + 1j * rng.standard_normal(2),
                                              rng.standard_normal(2) + 1j * rng.standard_normal(2), rng).residual
                for _ in range(200))
    codim2 = max(orbits.codim2_orbit_meets(*rng.standard_normal((3, 5)), rng).residual for _ in range(50))
    m = orbits.counterexample_min(10 ** 6)
    ok = hyper < 1e-10 and codim2 < 1e-8 and 0.43 <= m <= 0.44
    return report(10, "orbit results", ok,
                  f"hyperplane max {hyper:.2e}, codim 2 max {codim2:.2e}, counterexample min {m:.6f} "
                  f"(limit {orbits.COUNTEREXAMPLE_LIMIT:.6f})")


def criterion_11(mesh5):
    rng = rng_for(11)
    counts = []
    for n in range(0, 11):
        a = random_sphere_points(1, rng)[0]
        counts.append(len(incidence.nodal_domains(zonal_from_axis(a, n), mesh5)))
    torus = len(incidence.nodal_domains(harmonics.torus_surface_u, torus_mesh(64)))
    ok = counts == [n + 1 for n in range(11)] and torus == 2
    return report(11, "nodal domain counts", ok, f"zonal n=0..10 -> {counts}, torus cos s -> {torus}")


def test_criterion_1(mesh5):
    assert criterion_1(mesh5)


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


def test_criterion_4():
    assert criterion_4()


def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7(mesh5):
    assert criterion_7(mesh5)


def test_criterion_8():
    assert criterion_8()


def test_criterion_9():
    assert criterion_9()


def test_criterion_10():
    assert criterion_10()


def test_criterion_11(mesh5):
    assert criterion_11(mesh5)


if __name__ == "__main__":
    m = icosphere(5)
    fns = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
           criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]
    results = [f(m) if "mesh5" in f.__code__.co_varnames[:f.__code__.co_argcount] else f() for f in fns]
    sys.exit(0 if all(results) else 1)
