from fractions import Fraction

import numpy as np
import pytest

from hhbounds import catalog as C
from hhbounds import geometry as G
from hhbounds import harness as H
from hhbounds import shapes as S
from hhbounds.simplex_bounds import AverageCache, evaluate
from hhbounds.testfuncs import neg_abs, random_affine, squared_norm

DIAMOND = S.Parallelogram(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
SQUARE = S.Parallelogram(((-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)))
FLAT_TOL = {0: 1.0, 1: 1e-11, 2: 1e-10}


def test_manifest_is_complete_and_sorted():
    m = C.manifest()
    ids = [row["id"] for row in m]
    assert ids == sorted(ids) and len(set(ids)) == len(C.ENTRIES)
    for row in m:
        assert set(row) == {"id", "anchor", "family", "shape", "hypothesis",
                            "tight_for_affine", "reducer"}
        assert row["anchor"] and row["shape"]
    assert H.uncovered_entries() == []
    with pytest.raises(C.CatalogError):
        C.get("no_such_entry")


def test_every_entry_generates_on_a_canonical_shape():
    shapes = H.canonical_shapes()
    for e in C.ENTRIES:
        hits = [s for s in shapes.values() if e.applies(s) is not None]
        assert hits, e.id
        exprs = e.generate(e.applies(hits[0]))
        assert exprs and all(sum(t.weight for t in b.terms) == 1 for b in exprs)


def test_pooled_keeps_multiplicity():
    # f(O)/3 + 2/3 * vertex mean for x^2 + y^2 on [-1, 1]^2
    row = H.run_entry(C.get("poly"), SQUARE, squared_norm(2), tol=1e-11)
    assert row.lhs == pytest.approx(2 / 3, abs=1e-10)
    assert row.rhs == pytest.approx(4 / 3, abs=1e-10)
    a, b = G.point_mass((0.0, 0.0)), G.point_mass((1.0, 0.0))
    out = C.pooled([(Fraction(1, 2), G.Region.of(a, b)), (Fraction(1, 2), G.Region.of(b))])
    weights = {r.pieces: w for w, r in out}
    assert weights == {(a,): Fraction(1, 4), (b,): Fraction(3, 4)}


def test_vertex_forms_fail_under_quarter_convexity_only():
    # -|x| is affine on each quarter of the diamond but not convex
    f = neg_abs((1.0, 0.0))
    for eid, rhs in (("par_min_vertex", -2 / 3), ("par_vertex_mean", -1 / 2)):
        row = H.run_entry(C.get(eid), DIAMOND, f, tol=1e-11)
        assert row.lhs == pytest.approx(-1 / 3, abs=1e-10)
        assert row.rhs == pytest.approx(rhs, abs=1e-10)
        assert not row.holds and not row.hypothesis_met
    diag = H.run_entry(C.get("par_min_diag"), DIAMOND, f, tol=1e-11)
    assert diag.holds and diag.hypothesis_met


def test_balanced_split_equalizes_volume_and_umbrella_area():
    d = S.Dipyramid(5, 1.0, -0.6, 1.5)
    a0, a1 = G.measure(d.umbrella(d.h0)), G.measure(d.umbrella(d.h1))
    s = C.balanced_split(d)
    lo, _ = S.dipyramid_split(d, s)
    assert lo.volume() / d.volume() == pytest.approx(a0 / (a0 + a1), rel=1e-12)
    # the form with the two sines swapped misses the balance
    e0, e1 = d.sin_eta(d.h0), d.sin_eta(d.h1)
    lo_swapped, _ = S.dipyramid_split(d, e0 / (e0 + e1))
    assert abs(lo_swapped.volume() / d.volume() - a0 / (a0 + a1)) > 1e-2


def test_lower64_enumeration_size():
    assert len(C.get("par_lower64").generate(DIAMOND)) == 256
    q = H.canonical_shapes()["quadrilateral"]
    assert len(C.get("quad_lower16").generate(q)) == 16


def test_annulus_discrete_weights():
    a = S.Annulus(1.0, 2.0)
    b = C.annulus_discrete(a, 24)
    assert sum(t.weight for t in b.terms) == 1
    r = evaluate(b, squared_norm(2), FLAT_TOL)
    assert r.holds


@pytest.mark.parametrize("name", ["triangle", "hexagon", "quadrilateral", "parallelogram",
                                  "kite", "fan", "cube_split"])
def test_affine_tightness(name):
    shape = H.canonical_shapes()[name]
    f = random_affine(shape.body.ambient, 3)
    tol = {**FLAT_TOL, 3: 1e-9}
    cache = AverageCache()
    for e in C.entries_for(shape):
        if not e.tight_for_affine:
            continue
        for b in e.generate(e.applies(shape)):
            r = evaluate(b, f, tol, cache=cache)
            assert abs(r.gap) <= r.slack_tolerance, (e.id, b.label, r.gap)


def test_hypothesis_fields_match_cells():
    shapes = H.canonical_shapes()
    for name in ("diamond", "hexagon", "cube"):
        sh = shapes[name]
        for e in C.entries_for(sh):
            view = e.applies(sh)
            for seed in (0, 1):
                f = H.hypothesis_field(e.hypothesis, view, seed)
                assert H.hypothesis_met(e.hypothesis, view, f), (name, e.id, seed)


def test_curved_shapes_use_smooth_fields():
    shapes = H.canonical_shapes()
    e = C.get("disk_upper")
    kinds = {H.hypothesis_field(e.hypothesis, shapes["disk"], s).kind for s in range(8)}
    assert "max_affine" not in kinds and "soft_max_affine" in kinds
    sq = C.get("par_center")
    kinds = {H.hypothesis_field(sq.hypothesis, DIAMOND, s).kind for s in range(8)}
    assert "max_affine" in kinds


def test_symmetric_dipyramid_splits_in_half():
    assert np.isclose(C.balanced_split(S.Dipyramid(6, 1.0, -1.0, 1.0)), 0.5)
