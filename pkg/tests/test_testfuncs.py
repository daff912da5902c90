import numpy as np
import pytest

from hhbounds import geometry as G
from hhbounds import testfuncs as T

BOX = G.Region.of(G.triangle((-2, -2), (2, -2), (2, 2)), G.triangle((-2, -2), (2, 2), (-2, 2)))
CUBE3 = G.tetra((-2, -2, -2), (4, -2, -2), (-2, 4, -2), (-2, -2, 4))


@pytest.mark.parametrize("kind", T.RANDOM_KINDS)
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_random_convex_is_deterministic(kind, d):
    X = np.random.default_rng(0).normal(size=(50, d))
    f1, f2 = T.random_convex(kind, d, 11), T.random_convex(kind, d, 11)
    assert np.array_equal(f1(X), f2(X))
    assert not np.array_equal(f1(X), T.random_convex(kind, d, 12)(X))
    assert f1.seed == 11 and f1.kind == kind and f1.globally_convex


@pytest.mark.parametrize("kind", T.RANDOM_KINDS)
def test_random_convex_passes_midpoint_check(kind):
    for seed in range(5):
        ok, pair = T.check_convex_on(T.random_convex(kind, 2, seed), BOX, samples=2000, seed=seed)
        assert ok, pair
        ok, pair = T.check_convex_on(T.random_convex(kind, 3, seed), CUBE3, samples=2000, seed=seed)
        assert ok, pair


def test_midpoint_check_catches_concave():
    ok, pair = T.check_convex_on(T.neg_abs((1.0, 0.0)), BOX, samples=2000)
    assert not ok and pair is not None
    with pytest.raises(ValueError):
        T.check_convex_on(T.squared_norm(2), G.AnnulusSector((0.0, 0.0), 1.0, 2.0))


def test_soft_max_affine_sandwich():
    A = np.array([[1.0, 0.0], [-1.0, 0.5], [0.0, -1.0]])
    b = np.array([0.0, 0.3, -0.2])
    t = 0.3
    f = T.soft_max_affine(A, b, t)
    X = np.random.default_rng(1).normal(size=(200, 2))
    hard = (X @ A.T + b).max(axis=1)
    # max <= t log sum exp(./t) <= max + t log m
    assert np.all(f(X) >= hard - 1e-12)
    assert np.all(f(X) <= hard + t * np.log(3) + 1e-12)
    with pytest.raises(ValueError):
        T.soft_max_affine(A, b, 0.0)


def test_constructor_validation():
    with pytest.raises(ValueError):
        T.max_affine([[1.0, 0.0]], [0.0, 1.0])
    with pytest.raises(ValueError):
        T.norm_power((0.0,), 0.5)
    with pytest.raises(ValueError):
        T.exp_affine((1.0,), scale=-1.0)
    with pytest.raises(ValueError):
        T.random_convex("max_affine", 5, 0)
    with pytest.raises(ValueError):
        T.random_convex("nope", 2, 0)
    with pytest.raises(ValueError):
        T.squared_norm(2)(np.zeros((3, 3)))
    assert not T.quadratic([[1.0, 0.0], [0.0, -1.0]]).convex


def test_piecewise_fields_are_convex_on_cells_only():
    S = np.array([[[0, 0], [1, 0], [0, 1]], [[1, 0], [1, 1], [0, 1]]], float)
    f = T.random_piecewise_simplicial(S, seed=4)
    assert f.convex_on(S[0]) and f.convex_on(S[1])
    assert not f.globally_convex
    assert not f.convex_on(np.array([[0, 0], [1, 1], [0.2, 0.9]]))
    for cell in S:
        ok, pair = T.check_convex_on(f, G.Simplex(tuple(map(tuple, cell))), samples=2000)
        assert ok, pair


def test_neg_abs_values_and_cells():
    f = T.neg_abs((0.0, 1.0))
    assert np.allclose(f(np.array([[0.3, -2.0], [1.0, 0.5]])), [-2.0, -0.5])
    assert f.convex_on([[0, 0], [1, 1], [-1, 1]])
    assert not f.convex_on([[0, -1], [1, 1], [-1, 1]])


def test_field_from_spec():
    f = T.field_from_spec({"kind": "max_affine", "d": 2}, seed=3)
    X = np.random.default_rng(0).normal(size=(10, 2))
    assert np.array_equal(f(X), T.random_convex("max_affine", 2, 3)(X))
    assert T.spec_is_seeded({"kind": "psd_quadratic", "d": 2})
    assert not T.spec_is_seeded({"kind": "psd_quadratic", "d": 2, "seed": 1})
    assert not T.spec_is_seeded({"kind": "max_affine", "slopes": [[1.0]], "offsets": [0.0]})
    g = T.field_from_spec({"kind": "affine", "gradient": [1.0, 2.0], "offset": 1.0})
    assert g(np.array([[1.0, 1.0]]))[0] == 4.0
    s = T.field_from_spec({"kind": "soft_max_affine", "slopes": [[1.0], [-1.0]],
                           "offsets": [0.0, 0.0], "temperature": 0.5})
    assert s(np.array([[0.0]]))[0] == pytest.approx(0.5 * np.log(2))
    assert T.field_from_spec({"kind": "constant", "value": 2.0, "d": 3}).constant == 2.0
    for bad in ({"kind": "max_affine", "d": 2}, {"kind": "wat"}, {"d": 2},
                {"kind": "affine", "gradient": [1.0], "extra": 1},
                {"kind": "norm_power", "center": [0.0]}):
        with pytest.raises(ValueError):
            T.field_from_spec(bad)


def test_describe_is_json_ready():
    import json
    d = T.random_convex("psd_quadratic", 2, 5).describe()
    assert d["kind"] == "psd_quadratic" and d["seed"] == 5
    json.dumps(d)
