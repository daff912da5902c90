import numpy as np
import pytest

from hhbounds import catalog as C
from hhbounds import harness as H
from hhbounds import shapes as S
from hhbounds.testfuncs import random_convex, squared_norm


def test_canonical_shapes_cover_catalog():
    assert H.uncovered_entries() == []


def test_verify_shape_rows_are_sorted_and_complete():
    sh = H.canonical_shapes()["triangle"]
    res = H.verify_shape(sh, [2, 0, 1], shape_name="triangle", tol=H.SWEEP_TOL)
    entries = C.entries_for(sh)
    assert len(res.rows) == 3 * len(entries)
    keys = [(r.entry_id, r.seed) for r in res.rows]
    assert keys == sorted(keys)
    assert not res.violations and res.over_budget == 0


def test_given_field_records_hypothesis():
    sh = H.canonical_shapes()["diamond"]
    res = H.verify_shape(sh, [0], field=lambda s: random_convex("psd_quadratic", 2, s),
                         tol=H.SWEEP_TOL)
    assert all(r.hypothesis_met for r in res.rows)
    assert {r.function_kind for r in res.rows} == {"psd_quadratic"}


def test_run_entry_rejects_wrong_shape():
    with pytest.raises(C.CatalogError):
        H.run_entry(C.get("usL"), H.canonical_shapes()["hexagon"], squared_norm(2))


def test_converge_annulus_closed_form():
    # the discrete barycenter bound is exactly computable for |x|^2
    a = S.Annulus(1.0, 2.0)
    rows = H.converge_annulus(a, squared_norm(2), ns=(12, 24))
    for row in rows:
        m = a.mesh(row.n)
        wK, wL = m.barycenter_weights()
        bK = np.mean([s.array.mean(axis=0) for s in m.K[:1]], axis=0)
        bL = np.mean([s.array.mean(axis=0) for s in m.L[:1]], axis=0)
        expect = wK * float(bK @ bK) + wL * float(bL @ bL)
        assert row.discrete == pytest.approx(expect, abs=1e-12)
        assert row.limit == pytest.approx(22 / 9, abs=1e-10)


def test_dicone_tables():
    d = S.Dicone(1.0, -1.0, 0.8)
    ratios = H.dicone_volume_ratios(d, ns=(6, 12, 24))
    diffs = [r.difference for r in ratios]
    assert diffs == sorted(diffs, reverse=True)
    rows = H.converge_dicone(d, squared_norm(3), ns=(12, 24))
    assert rows[1].difference < rows[0].difference


def test_function_kind_labels():
    assert H.function_kind(random_convex("max_affine", 2, 0)) == "max_affine"
