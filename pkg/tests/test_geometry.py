import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbounds import geometry as G


def test_simplex_measures():
    assert G.triangle((0, 0), (1, 0), (0, 1)).measure() == pytest.approx(0.5)
    assert G.tetra((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)).measure() == pytest.approx(1 / 6)
    assert G.segment((0, 0, 0), (1, 2, 2)).measure() == pytest.approx(3.0)
    assert G.point_mass((1.0, 2.0)).measure() == 1.0
    # right triangle embedded in R^3
    assert G.triangle((0, 0, 0), (2, 0, 0), (0, 0, 3)).measure() == pytest.approx(3.0)


def test_simplex_volume_4d_and_thin():
    P = np.vstack([np.zeros(4), np.eye(4)])
    assert G.simplex_volume(P) == pytest.approx(1 / 24, rel=1e-14)
    # a sliver whose area is known exactly: base 1, height 1e-7
    thin = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 1e-7, 0.0]])
    assert G.simplex_volume(thin) == pytest.approx(0.5e-7, rel=1e-9)


def test_degenerate_simplex_rejected():
    with pytest.raises(G.GeometryError):
        G.triangle((0, 0), (1, 1), (2, 2))
    with pytest.raises(G.GeometryError):
        G.Simplex(((0.0,), (1.0,), (2.0,)))
    with pytest.raises(G.GeometryError):
        G.Simplex(((0.0, 0.0), (1.0,)))


def test_sub_simplex_and_subset_simplex():
    s = G.triangle((0, 0), (3, 0), (0, 3))
    assert G.sub_simplex(s, [0, 2]).vertices == ((0.0, 0.0), (0.0, 3.0))
    b = np.array(G.barycenter(s))
    for K in ([], [0], [1, 2]):
        sub = G.subset_simplex(s, K)
        assert np.allclose(sub.array.mean(axis=0), b)
    # K empty gives the homothetic image with ratio 1, i.e. the simplex itself
    assert np.allclose(G.subset_simplex(s, []).array, s.array)
    with pytest.raises(G.GeometryError):
        G.subset_simplex(s, [0, 1, 2])
    with pytest.raises(G.GeometryError):
        G.sub_simplex(s, [5])


def test_homothety():
    h = G.Homothety((1.0, 1.0), 0.5)
    assert h((3.0, 1.0)) == (2.0, 1.0)
    assert h.inverse()(h((0.3, -2.0))) == pytest.approx((0.3, -2.0))
    with pytest.raises(G.GeometryError):
        G.Homothety((0.0,), 0.0)
    s = G.triangle((0, 0), (1, 0), (0, 1))
    assert s.mapped(h).measure() == pytest.approx(0.25 * s.measure())


def test_curved_measures():
    assert G.Circle((0.0, 0.0), 2.0).measure() == pytest.approx(4 * math.pi)
    assert G.AnnulusSector((0.0, 0.0), 1.0, 2.0).measure() == pytest.approx(3 * math.pi)
    assert G.disk((0.0, 0.0), 1.0).measure() == pytest.approx(math.pi)
    assert G.Ball((0.0, 0.0, 0.0), 1.0).measure() == pytest.approx(4 * math.pi / 3)
    assert G.Sphere((0.0, 0.0, 0.0), 1.0).measure() == pytest.approx(4 * math.pi)
    # lateral area pi r l with slant l = sqrt(r^2 + h^2)
    assert G.ConePatch((0.0, 0.0, 0.0), 3.0, 4.0).measure() == pytest.approx(15 * math.pi)


def test_region_validation_and_measure():
    t = G.triangle((0, 0), (1, 0), (0, 1))
    r = G.Region.of(t, G.triangle((1, 0), (1, 1), (0, 1)))
    assert G.measure(r) == pytest.approx(1.0)
    with pytest.raises(G.GeometryError):
        G.Region.of(t, G.segment((0, 0), (1, 0)))
    with pytest.raises(G.GeometryError):
        G.Region(())
    assert G.measure(G.points([(0, 0), (1, 1), (2, 2)])) == 3.0


def test_region_json_roundtrip():
    r = G.Region.of(G.AnnulusSector((0.0, 0.0), 0.5, 1.0, 0.0, 1.0), G.disk((3.0, 0.0), 1.0))
    back = G.region_from_dict(G.region_to_dict(r))
    assert back == r
    with pytest.raises(G.GeometryError):
        G.region_from_dict({"pieces": [{"type": "blob"}]})
    with pytest.raises(G.GeometryError):
        G.piece_from_dict({"type": "simplex", "vertices": [[0, 0]], "extra": 1})


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=6, max_size=6),
       st.floats(0.1, 3.0), st.floats(-2, 2), st.floats(-2, 2))
def test_homothety_scales_measure(coords, lam, ax, ay):
    P = np.array(coords).reshape(3, 2)
    try:
        s = G.Simplex(tuple(map(tuple, P)))
    except G.GeometryError:
        return
    img = s.mapped(G.Homothety((ax, ay), lam))
    assert img.measure() == pytest.approx(lam**2 * s.measure(), rel=1e-9)
    lam_b = G.barycentric_coordinates(s, G.barycenter(s))
    assert np.allclose(lam_b, 1 / 3)
