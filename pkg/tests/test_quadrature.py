import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbounds import geometry as G
from hhbounds.quadrature import (
    BudgetExceeded, EvaluationError, Polynomial, average, average_weighted,
    exact_average_polynomial,
)
from hhbounds.testfuncs import affine, constant, random_convex, squared_norm


def test_polynomial_examples():
    f = Polynomial(((1.0, (2, 0)), (1.0, (0, 2))))
    tri = G.triangle((0, 0), (1, 0), (0, 1))
    assert exact_average_polynomial(f, tri) == pytest.approx(1 / 3, abs=1e-15)
    assert average(f, tri).value == pytest.approx(1 / 3, abs=1e-12)
    x = Polynomial(((1.0, (1, 0)),))
    assert average(x, G.segment((0, 0), (1, 0))).value == pytest.approx(0.5, abs=1e-14)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        Polynomial(())
    with pytest.raises(ValueError):
        Polynomial(((1.0, (1, -1)),))
    with pytest.raises(ValueError):
        exact_average_polynomial(Polynomial(((1.0, (1,)),)), G.triangle((0, 0), (1, 0), (0, 1)))


def test_oracle_high_degree_closed_form():
    # x^7 on [0, 2]: 2^8 / 8 / 2 = 16
    p = Polynomial(((1.0, (7,)),))
    assert exact_average_polynomial(p, G.segment((0.0,), (2.0,))) == pytest.approx(16.0, rel=1e-15)
    assert average(p, G.segment((0.0,), (2.0,)), tol=1e-12).value == pytest.approx(16.0, rel=1e-12)


@pytest.mark.parametrize("piece, f, expected", [
    (G.disk((0.0, 0.0), 2.0), squared_norm(2), 2.0),
    (G.AnnulusSector((0.0, 0.0), 1.0, 2.0), squared_norm(2), 2.5),
    (G.Circle((0.0, 0.0), 1.5), squared_norm(2), 2.25),
    (G.Ball((0.0, 0.0, 0.0), 1.0), squared_norm(3), 0.6),
    (G.Sphere((0.0, 0.0, 0.0), 2.0), squared_norm(3), 4.0),
])
def test_curved_closed_forms(piece, f, expected):
    r = average(f, piece, tol=1e-10)
    assert r.value == pytest.approx(expected, abs=1e-9)
    assert r.error_estimate <= 1e-10


def test_cone_surface_average_and_weighted():
    cone = G.ConePatch((0.0, 0.0, 0.0), 1.0, 1.0)
    z = affine((0.0, 0.0, 1.0))
    # dS is proportional to rho: int (1 - rho) rho / int rho = 1/3
    assert average(z, cone, tol=1e-10).value == pytest.approx(1 / 3, abs=1e-9)
    # Avg of f / rho: int f(rho) d rho / int rho d rho
    axis = ((0.0, 0.0, 0.0), (0.0, 0.0, 1.0))
    assert average_weighted(z, cone, axis, tol=1e-10).value == pytest.approx(1.0, abs=1e-9)
    assert average_weighted(constant(1.0, 3), cone, axis).value == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(G.GeometryError):
        average_weighted(z, cone, ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0)))
    with pytest.raises(G.GeometryError):
        average_weighted(z, G.tetra((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)), axis)


def test_point_masses_give_mean():
    f = squared_norm(2)
    r = average(f, G.points([(0, 0), (1, 0), (0, 2)]))
    assert r.value == pytest.approx(5 / 3, abs=1e-15)
    assert r.error_estimate == 0.0


def test_union_is_measure_weighted():
    f = affine((1.0,))
    r = G.Region.of(G.segment((0.0,), (1.0,)), G.segment((1.0,), (4.0,)))
    assert average(f, r).value == pytest.approx(2.0, abs=1e-13)


def test_budget_and_nonfinite():
    f = random_convex("exp_affine", 3, 1)
    with pytest.raises(BudgetExceeded) as info:
        average(f, G.Ball((0.0, 0.0, 0.0), 1.0), tol=1e-14, budget=2000)
    assert math.isfinite(info.value.best.value)

    def bad(X):
        out = X[:, 0].copy()
        out[0] = np.nan
        return out
    with pytest.raises(EvaluationError):
        average(bad, G.segment((0.0,), (1.0,)))


def test_kinked_segment_regression():
    # max-affine average that a pure coarse/fine comparison got wrong by 6.5e-3
    from hhbounds import catalog, harness
    sh = harness.canonical_shapes()["diamond"]
    e = catalog.get("par_min_diag")
    f = harness.hypothesis_field(e.hypothesis, e.applies(sh), 80)
    A, _, C, _ = sh.vertices
    seg = G.segment(A, C)
    t = (np.arange(400_000) + 0.5) / 400_000
    dense = f(np.asarray(A) + t[:, None] * (np.asarray(C) - np.asarray(A))).mean()
    got = average(f, seg, tol=1e-12).value
    assert got == pytest.approx(1.69301162, abs=5e-9)
    assert got == pytest.approx(dense, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10_000))
def test_affine_average_is_value_at_barycenter(k, seed):
    rng = np.random.default_rng(seed)
    try:
        s = G.Simplex(tuple(map(tuple, rng.normal(size=(k + 1, 3)))))
    except G.GeometryError:
        return
    g = rng.normal(size=3)
    f = affine(g, 0.7)
    expect = float(g @ s.array.mean(axis=0)) + 0.7
    assert average(f, s).value == pytest.approx(expect, abs=1e-12 * (1 + abs(expect)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_average_bounded_by_extremes(seed):
    rng = np.random.default_rng(seed)
    s = G.Simplex(tuple(map(tuple, rng.normal(size=(3, 2)))))
    f = random_convex("psd_quadratic", 2, seed)
    vals = f(s.array)
    a = average(f, s).value
    # convex: the average is at most the largest vertex value and at least f(barycenter)
    assert a <= vals.max() + 1e-12
    assert a >= float(f(s.array.mean(axis=0)[None])[0]) - 1e-12
