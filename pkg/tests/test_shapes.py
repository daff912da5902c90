import math

import numpy as np
import pytest

from hhbounds import geometry as G
from hhbounds import shapes as S
from hhbounds.harness import canonical_shapes

SQRT5 = math.sqrt(5)
PLATONIC = {
    # faces, volume for unit edge
    "tetra": (4, 1 / (6 * math.sqrt(2))),
    "cube": (6, 1.0),
    "octa": (8, math.sqrt(2) / 3),
    "icosa": (20, 5 * (3 + SQRT5) / 12),
    "dodeca": (12, (15 + 7 * SQRT5) / 4),
}


@pytest.mark.parametrize("kind", sorted(PLATONIC))
def test_platonic_bodies(kind):
    faces, vol = PLATONIC[kind]
    P = S.PlatonicBody.with_edge(kind, 1.0)
    assert len(P.faces) == faces
    assert P.edge == pytest.approx(1.0)
    assert G.measure(P.body) == pytest.approx(vol, rel=1e-12)
    # center sits at the inradius from every face plane
    for F in P.faces:
        n = P.face_normal(F)
        assert float(n @ np.asarray(P.face_center(F))) == pytest.approx(P.inradius)


def test_star_polytope_volume_with_mixed_signs():
    signs = (1, -1, 1, -1, 1, -1)
    star = S.StarPolytope("cube", 1.0, height=0.3, signs=signs)
    edge = S.PlatonicBody("cube", 1.0).edge
    pyramid = edge**2 * 0.3 / 3
    assert G.measure(star.body) == pytest.approx(edge**3 + sum(signs) * pyramid, rel=1e-12)
    with pytest.raises(S.ShapeError):
        S.StarPolytope("cube", 1.0, height=0.3, signs=(1, -1))
    with pytest.raises(S.ShapeError):
        S.StarPolytope("cube", 1.0, height=5.0, signs=(-1,) * 6)


def test_annulus_mesh_areas():
    a = S.Annulus(1.0, 2.0)
    for n in (6, 12, 96):
        m = a.mesh(n)
        k_area, l_area, total = m.closed_form_areas()
        assert m.K[0].measure() == pytest.approx(k_area, rel=1e-12)
        assert m.L[0].measure() == pytest.approx(l_area, rel=1e-12)
        assert G.measure(m.body) == pytest.approx(total, rel=1e-12)
        assert sum(m.barycenter_weights()) == pytest.approx(1.0)
    assert G.measure(a.body) == pytest.approx(3 * math.pi)
    with pytest.raises(S.ShapeError):
        a.mesh(4)
    with pytest.raises(S.ShapeError):
        S.Annulus(2.0, 1.0)


def test_dipyramid_and_dicone_volumes():
    d = S.Dipyramid(6, 1.0, -1.0, 0.7)
    base = 3 * math.sqrt(3) / 2
    assert d.volume() == pytest.approx(base * 1.7 / 3, rel=1e-12)
    assert G.measure(d.body) == pytest.approx(d.volume(), rel=1e-12)
    lo, hi = S.dipyramid_split(d, 0.3)
    assert lo.volume() + hi.volume() == pytest.approx(d.volume(), rel=1e-12)
    c = S.Dicone(1.0, -1.0, 0.8)
    assert c.volume() == pytest.approx(math.pi * 1.8 / 3, rel=1e-12)
    ratios = [S.dicone_limit_mesh(c, n).volume() / c.volume() for n in (6, 12, 24, 48)]
    assert all(r < 1 for r in ratios) and ratios == sorted(ratios)
    with pytest.raises(S.ShapeError):
        S.dipyramid_split(d, 1.0)
    with pytest.raises(S.ShapeError):
        S.Dipyramid(6, 1.0, 0.5, 0.5)


def test_cube_split():
    c = S.CubeSplit(2.0)
    vols = [s.measure() for s in c.split]
    assert len(vols) == 6 and np.allclose(vols, 8 / 6)
    assert G.measure(c.body) == pytest.approx(8.0)
    assert len(c.ring) == 6
    with pytest.raises(S.ShapeError):
        S.CubeSplit(1.0, o1=9)


def test_quadrilateral_validation():
    S.QuadrilateralEH(((0.0, 0.0), (0.5, -1.0), (2.0, 0.0), (1.2, 1.0)))
    with pytest.raises(S.ShapeError):
        S.QuadrilateralEH(((0.0, 0.0), (0.5, -1.0), (2.0, 0.0), (1.2, 3.0)))
    with pytest.raises(S.ShapeError):
        S.Parallelogram(((0.0, 0.0), (2.0, 0.0), (2.5, 1.0), (0.0, 1.0)))
    q = S.Parallelogram(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
    assert len(q.cell_complex("quarters").cells) == 4
    assert len(q.cell_complex("halves").cells) == 2


def test_nice_polygons_and_fans():
    hexagon = S.NicePolygon.regular(6)
    assert hexagon.very_nice and hexagon.n == 6
    kite = S.NicePolygon(((2.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)), (0.5, 0.0))
    assert not kite.very_nice
    with pytest.raises(S.ShapeError):
        S.NicePolygon(((2.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)), (0.0, 0.0))
    with pytest.raises(S.ShapeError):
        S.Fan((0.0, 0.0), ((1.0, 0.0), (0.0, 1.0), (-2.0, 0.0)))


def test_coerce():
    square = S.Parallelogram(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
    poly = S.coerce(square, S.NicePolygon)
    assert isinstance(poly, S.NicePolygon) and poly.n == 4
    cube = S.PlatonicBody.with_edge("cube", 1.0)
    split = S.coerce(cube, S.CubeSplit)
    assert isinstance(split, S.CubeSplit) and split.edge == pytest.approx(1.0)
    assert S.coerce(S.Annulus(1.0, 2.0), S.NicePolygon) is None


@pytest.mark.parametrize("name", sorted(canonical_shapes()))
def test_json_roundtrip(name):
    shape = canonical_shapes()[name]
    back = S.shape_from_dict(shape.to_dict())
    assert type(back) is type(shape)
    assert G.measure(back.body) == pytest.approx(G.measure(shape.body), rel=1e-12)


def test_shape_spec_errors():
    for bad in ({"kind": "blob"}, {"kind": "disk"}, {"kind": "disk", "radius": 1.0, "x": 1},
                {"kind": "platonic", "body": "cube", "edge": 1.0, "circumradius": 1.0},
                {"kind": "simplex", "vertices": [[0, 0], [1, 1], [2, 2]]}, []):
        with pytest.raises(S.ShapeError):
            S.shape_from_dict(bad)
