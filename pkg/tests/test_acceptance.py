"""Acceptance suite: one test per criterion, each at its stated tolerance.

The session summary lists every criterion with PASS or FAIL.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from hhbounds import catalog, harness, shapes
from hhbounds.geometry import GeometryError, Simplex
from hhbounds.quadrature import Polynomial, average, exact_average_polynomial
from hhbounds.simplex_bounds import AverageCache, evaluate
from hhbounds.testfuncs import constant, neg_abs, random_affine, random_convex, squared_norm

CLOSED_TOL = 1e-8
# tolerances per dimension for the random simplex suite
SIMPLEX_TOL = {0: 1.0, 1: 1e-10, 2: 1e-9, 3: 1e-7, 4: 1e-6}


def _random_simplex(rng, k: int, d: int) -> Simplex:
    while True:
        try:
            return Simplex(tuple(map(tuple, rng.normal(size=(k + 1, d)))))
        except GeometryError:
            pass


@pytest.mark.criterion(1, "oracle agreement")
def test_oracle_agreement():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        k = int(rng.integers(1, 4))
        d = int(rng.integers(k, 4))
        s = _random_simplex(rng, k, d)
        p = Polynomial.random(rng, d, int(rng.integers(0, 5)))
        exact = exact_average_polynomial(p, s)
        got = average(p, s, tol=1e-13 * max(abs(exact), 1e-300)).value
        worst = max(worst, abs(got - exact) / abs(exact))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10, f"worst relative error {worst:.3e}"
    assert elapsed < 30.0, f"took {elapsed:.1f} s"


@pytest.mark.criterion(2, "simplex partition and chain suite")
def test_simplex_suite():
    rng = np.random.default_rng(12345)
    families = ("max_affine", "psd_quadratic", "exp_affine")
    violations, loose, affine_checks = [], [], 0
    for i in range(500):
        d = int(rng.integers(1, 5))
        sh = shapes.SimplexShape(_random_simplex(rng, d, d).vertices)
        cache = AverageCache()
        for kind in families:
            f = random_convex(kind, d, i)
            for eid in ("thR", "thL"):
                row = harness.run_entry(catalog.get(eid), sh, f, tol=SIMPLEX_TOL, cache=cache)
                if not row.holds:
                    violations.append((i, kind, eid, row.label, row.gap, row.slack))
        fa = random_affine(d, i)
        for eid in ("thR", "thL"):
            for b in catalog.get(eid).generate(sh):
                rep = evaluate(b, fa, SIMPLEX_TOL, cache=cache)
                affine_checks += 1
                if abs(rep.gap) > rep.slack_tolerance:
                    loose.append((i, eid, b.label, rep.gap, rep.slack_tolerance))
    assert not violations, violations[:5]
    assert affine_checks > 0 and not loose, loose[:5]


@pytest.mark.criterion(3, "annulus closed forms")
def test_annulus_closed_forms():
    ann = shapes.Annulus(1.0, 2.0)
    f = squared_norm(2)
    usl = harness.run_entry(catalog.get("usL"), ann, f, tol=1e-11)
    usr = harness.run_entry(catalog.get("usR"), ann, f, tol=1e-11)
    assert abs(usl.lhs - 22 / 9) <= CLOSED_TOL
    assert abs(usl.rhs - 5 / 2) <= CLOSED_TOL
    assert abs(usr.lhs - 5 / 2) <= CLOSED_TOL
    assert abs(usr.rhs - 70 / 27) <= CLOSED_TOL
    assert usl.holds and usr.holds
    assert Fraction(196, 81) < Fraction(22, 9)
    assert Fraction(70, 27) < Fraction(8, 3)


@pytest.mark.criterion(4, "cube closed forms and max-affine seeds")
def test_cube():
    cube = shapes.PlatonicBody.with_edge("cube", 1.0)
    f = squared_norm(3)
    p1 = harness.run_entry(catalog.get("Plato_1"), cube, f, tol=1e-10)
    p4 = harness.run_entry(catalog.get("Plato_4"), cube, f, tol=1e-10)
    assert abs(p1.lhs - 1 / 4) <= CLOSED_TOL
    assert abs(p1.rhs - 5 / 16) <= CLOSED_TOL
    assert abs(p4.lhs - 15 / 64) <= CLOSED_TOL
    assert abs(p4.rhs - 1 / 4) <= CLOSED_TOL
    canon = harness.canonical_shapes()
    bad = []
    for name in ("cube", "cube_split"):
        res = harness.verify_shape(canon[name], range(50), shape_name=name,
                                   field=lambda s: random_convex("max_affine", 3, s),
                                   tol=harness.SWEEP_TOL)
        assert res.rows
        bad += res.violations
    assert not bad, bad[:5]


@pytest.mark.criterion(5, "negative control")
def test_negative_control():
    diamond = shapes.Parallelogram(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
    f = neg_abs((0.0, 1.0))
    center = harness.run_entry(catalog.get("par_center"), diamond, f, tol=1e-10)
    assert abs(center.lhs - 0.0) <= CLOSED_TOL
    assert abs(center.rhs + 1 / 3) <= CLOSED_TOL
    assert not center.holds
    for eid in ("ABCDO1", "ABCDO2"):
        row = harness.run_entry(catalog.get(eid), diamond, f, tol=1e-10)
        assert row.hypothesis_met and row.holds, row


@pytest.mark.criterion(6, "dicone equality case")
def test_dicone_weighted_equality():
    dicone = harness.canonical_shapes()["dicone"]
    row = harness.run_entry(catalog.get("dicone_weighted"), dicone, constant(1.0, 3), tol=1e-10)
    assert abs(row.lhs - 1.0) <= CLOSED_TOL
    assert abs(row.rhs - 1.0) <= CLOSED_TOL


@pytest.fixture(scope="module")
def annulus_convergence():
    return harness.converge_annulus(shapes.Annulus(1.0, 2.0), squared_norm(2), ns=(12, 24, 48, 96))


@pytest.mark.criterion(7, "annulus convergence")
def test_annulus_convergence_threshold(annulus_convergence):
    last = annulus_convergence[-1]
    assert last.n == 96
    assert abs(last.limit - 22 / 9) <= CLOSED_TOL
    assert last.difference < 1e-3, f"difference at n=96 is {last.difference:.4e}"


@pytest.mark.criterion(7, "annulus convergence")
def test_annulus_convergence_monotone(annulus_convergence):
    diffs = [r.difference for r in annulus_convergence]
    assert all(a > b for a, b in zip(diffs, diffs[1:])), diffs


@pytest.mark.slow
@pytest.mark.criterion(8, "full catalog sweep")
def test_full_sweep():
    assert harness.uncovered_entries() == []
    start = time.perf_counter()
    res = harness.sweep(range(100))
    elapsed = time.perf_counter() - start
    assert len({r.entry_id for r in res.rows}) == len(catalog.ENTRIES)
    assert not res.violations, res.violations[:5]
    assert elapsed < 600.0, f"took {elapsed:.1f} s"
    assert math.isfinite(sum(r.gap for r in res.rows))
