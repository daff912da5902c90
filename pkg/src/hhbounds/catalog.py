"""Named inequalities bound to concrete shapes.

Each :class:`CatalogEntry` turns a shape into one or more
:class:`~hhbounds.simplex_bounds.BoundExpression` objects and states the
convexity hypothesis a test function must satisfy for them to hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .geometry import (
    Homothety, Region, Simplex, apply_homothety, as_region, barycenter, point_mass,
    points, segment, subset_simplex,
)
from .shapes import (
    Annulus, BallShape, CubeSplit, Dicone, Dipyramid, DiskShape, Fan, NicePolygon,
    Parallelogram, PlatonicBody, QuadrilateralEH, Shape, SimplexShape, StarPolytope,
    coerce, dipyramid_split,
)
from .simplex_bounds import (
    LOWER, UPPER, AxisWeight, BoundExpression, Term, all_chains, all_partitions,
    enumerate_lower_bounds, normalized_weights, theorem_L_chain, theorem_R_bound,
    VertexPartition,
)

POOL_RTOL = 1e-9
EQUAL_VOLUME_RTOL = 1e-12
DEFAULT_SPLITS = (0.25, 0.5, 0.8)
DEFAULT_MESH_N = 24


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Hypothesis:
    """Where the test function must be convex.

    ``whole``: on the shape's convex hull (globally convex test fields);
    ``cells``: on every cell of the named decomposition;
    ``sectors``: on finitely many angular sectors about the shape's center.
    """

    kind: str
    cells: str = ""

    def describe(self) -> str:
        return self.kind if self.kind != "cells" else f"cells:{self.cells}"


WHOLE = Hypothesis("whole")
SECTORS = Hypothesis("sectors")


def cells(name: str) -> Hypothesis:
    return Hypothesis("cells", name)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    anchor: str
    family: str
    shape_type: type
    hypothesis: Hypothesis
    generator: Callable[[Shape], list]
    tight_for_affine: bool = True
    reducer: Optional[str] = None
    predicate: Optional[Callable[[Shape], bool]] = None
    exact_type: bool = False

    def applies(self, shape: Shape) -> Optional[Shape]:
        """The shape viewed as ``shape_type`` if this entry can use it, else None."""
        if self.exact_type:
            s = shape if type(shape) is self.shape_type else coerce(shape, self.shape_type)
            if s is not None and type(s) is not self.shape_type:
                s = None
        else:
            s = coerce(shape, self.shape_type)
        if s is None:
            return None
        if self.predicate is not None and not self.predicate(s):
            return None
        return s

    def generate(self, shape: Shape) -> list[BoundExpression]:
        s = self.applies(shape)
        if s is None:
            raise CatalogError(f"entry {self.id} does not apply to shape {shape.kind}")
        out = self.generator(s)
        for e in out:
            if not isinstance(e, BoundExpression):
                raise CatalogError(f"entry {self.id} produced {type(e).__name__}")
        return out

    def manifest(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "family": self.family,
                "shape": self.shape_type.kind, "hypothesis": self.hypothesis.describe(),
                "tight_for_affine": self.tight_for_affine, "reducer": self.reducer}


# ---------------------------------------------------------------------------
# helpers


def _pt(p) -> Region:
    return as_region(point_mass(p))


def _seg(a, b) -> Region:
    return as_region(segment(a, b))


def pooled(terms) -> list[tuple[Fraction, Region]]:
    """Rewrite ``[(weight, region), ...]`` with as few regions as possible.

    Each region average is split into its pieces by measure, equal pieces
    are merged, and pieces whose weight is the same multiple of their
    measure are joined into one region carrying their summed weight.
    """
    acc: dict = {}
    for w, r in terms:
        r = as_region(r)
        if w == 0:
            continue
        ms = [p.measure() for p in r.pieces]
        if max(ms) - min(ms) <= EQUAL_VOLUME_RTOL * max(ms):
            shares = [Fraction(1, len(ms))] * len(ms)
        else:
            total = math.fsum(ms)
            shares = [Fraction(m / total) for m in ms]
        for p, share in zip(r.pieces, shares):
            acc[p] = acc.get(p, Fraction(0)) + Fraction(w) * share
    groups: list[list] = []
    for p, w in acc.items():
        ratio = float(w) / p.measure()
        for g in groups:
            if g[0] == p.dim and math.isclose(g[1], ratio, rel_tol=POOL_RTOL):
                g[2] += w
                g[3].append(p)
                break
        else:
            groups.append([p.dim, ratio, w, [p]])
    return [(w, Region(tuple(pieces))) for _, _, w, pieces in groups]


def simplex_weights(simplices) -> list[Fraction]:
    vols = [s.measure() for s in simplices]
    if max(vols) - min(vols) <= EQUAL_VOLUME_RTOL * max(vols):
        return [Fraction(1, len(vols))] * len(vols)
    total = math.fsum(vols)
    return normalized_weights([v / total for v in vols])


def aggregate(direction: str, simplices, per_simplex, label: str, target=None) -> BoundExpression:
    """Sum per-simplex bounds with volume weights into a bound on their union.

    ``per_simplex(i, s)`` returns ``[(weight, region), ...]`` summing to one.
    """
    simplices = list(simplices)
    terms = []
    for i, (s, w) in enumerate(zip(simplices, simplex_weights(simplices))):
        part = per_simplex(i, s)
        if sum(x for x, _ in part) != 1:
            raise CatalogError(f"per-simplex weights of {label} do not sum to one")
        terms += [(w * x, r) for x, r in part]
    target = Region(tuple(simplices)) if target is None else target
    pairs = pooled(terms)
    ws = normalized_weights([w for w, _ in pairs])
    return BoundExpression(direction, target, tuple(Term(w, r) for w, (_, r) in zip(ws, pairs)), label)


def _R_part(s: Simplex, K, L) -> list:
    """Terms of the partition bound on ``s`` for index groups K, L."""
    e = theorem_R_bound(s, VertexPartition(K, L))
    return [(t.weight, t.region) for t in e.terms]


def _L_part(s: Simplex, K) -> list:
    return [(Fraction(1), as_region(subset_simplex(s, K)))]


def _upper(target, pairs, label):
    return BoundExpression.build(UPPER, target, pairs, label)


def _lower(target, pairs, label):
    return BoundExpression.build(LOWER, target, pairs, label)


def _vertex_mean(verts) -> Region:
    return points(verts)


def _scaled(center, lam, r) -> Region:
    return apply_homothety(Homothety(tuple(center), lam), r)


# ---------------------------------------------------------------------------
# classic forms


def _simplex_lower(sh: SimplexShape):
    s = sh.simplex
    return [_lower(s, [(1, _pt(barycenter(s)))], "barycenter <= average")]


def _simplex_upper(sh: SimplexShape):
    s = sh.simplex
    return [_upper(s, [(1, _vertex_mean(s.vertices))], "average <= vertex mean")]


def _simplex_strong(sh: SimplexShape):
    s = sh.simplex
    n = s.dim
    return [_upper(s, [(Fraction(1, n + 1), _pt(barycenter(s))),
                       (Fraction(n, n + 1), _vertex_mean(s.vertices))],
                   "average <= barycenter/vertex-mean mix")]


def _round_lower(sh):
    return [_lower(sh.body, [(1, _pt(sh.center))], "center <= average")]


def _round_upper(sh):
    return [_upper(sh.body, [(1, sh.boundary)], "average <= boundary average")]


def _round_strong(sh):
    d = len(sh.center)
    return [_upper(sh.body, [(Fraction(1, d + 1), _pt(sh.center)),
                             (Fraction(d, d + 1), sh.boundary)],
                   "average <= center/boundary mix")]


def _is_regular(p: NicePolygon) -> bool:
    r = [math.dist(v, p.center) for v in p.vertices]
    return p.very_nice and math.isclose(min(r), max(r), rel_tol=1e-10)


def _ngon_strong(p: NicePolygon):
    return [_upper(p.body, [(Fraction(1, 3), _pt(p.center)), (Fraction(2, 3), p.boundary)],
                   "average <= center/perimeter mix")]


# ---------------------------------------------------------------------------
# generic simplex engines


def _thR(sh: SimplexShape):
    s = sh.simplex
    return [theorem_R_bound(s, p) for p in all_partitions(len(s.vertices))]


def _thL(sh: SimplexShape):
    s = sh.simplex
    out = []
    for K, L in all_chains(len(s.vertices)):
        out += theorem_L_chain(s, K, L)
    return out


# ---------------------------------------------------------------------------
# quadrilaterals and parallelograms


def _quad_AC(q: QuadrilateralEH):
    A, B, C, D = q.vertices
    return [_upper(q.body, [(Fraction(1, 6), _pt(B)), (Fraction(1, 6), _pt(D)),
                            (Fraction(2, 3), _seg(A, C))], "diagonal AC mix")]


def _quad_AC_vertices(q: QuadrilateralEH):
    A, B, C, D = q.vertices
    return [_upper(q.body, [(Fraction(1, 6), _pt(B)), (Fraction(1, 6), _pt(D)),
                            (Fraction(1, 3), _pt(A)), (Fraction(1, 3), _pt(C))], "diagonal AC vertex mix")]


def _quarter_sides(q: QuadrilateralEH):
    """Quarter triangles AOB, BOC, COD, DOA with O at index 1."""
    return list(q.quarters)


def _ABCDO1(q: QuadrilateralEH):
    return [aggregate(UPPER, _quarter_sides(q), lambda i, s: _R_part(s, {1}, {0, 2}),
                      "center/side mix", target=q.body)]


def _ABCDO2(q: QuadrilateralEH):
    A, B, C, D = q.vertices
    return [_upper(q.body, [(Fraction(1, 3), _pt(q.O))] + [(Fraction(1, 6), _pt(v)) for v in (A, B, C, D)],
                   "center/vertex mix")]


def _quad_lower16(q: QuadrilateralEH):
    return enumerate_lower_bounds(q.halves)


def _quad_PQ_QR(q: QuadrilateralEH):
    A, B, C, D = q.vertices
    h = Homothety(C, 2 / 3)
    return [_lower(q.body, [(Fraction(1, 2), _seg(h(D), h(A))), (Fraction(1, 2), _seg(h(A), h(B)))],
                   "segments through both barycenters")]


def _par_min_diag(p: Parallelogram):
    A, B, C, D = p.vertices
    third = Fraction(1, 6)
    return [_upper(p.body, [(third, _pt(B)), (third, _pt(D)), (Fraction(2, 3), _seg(A, C))], "via AC"),
            _upper(p.body, [(third, _pt(A)), (third, _pt(C)), (Fraction(2, 3), _seg(B, D))], "via BD")]


def _par_min_vertex(p: Parallelogram):
    A, B, C, D = p.vertices
    a, b = Fraction(1, 6), Fraction(1, 3)
    return [_upper(p.body, [(a, _pt(B)), (a, _pt(D)), (b, _pt(A)), (b, _pt(C))], "via AC vertices"),
            _upper(p.body, [(a, _pt(A)), (a, _pt(C)), (b, _pt(B)), (b, _pt(D))], "via BD vertices")]


def _par_vertex_mean(p: Parallelogram):
    return [_upper(p.body, [(1, _vertex_mean(p.vertices))], "average <= vertex mean")]


def _par_diagonals(p: Parallelogram):
    A, B, C, D = p.vertices
    return [_upper(p.body, [(Fraction(1, 3), _vertex_mean(p.vertices)),
                            (Fraction(1, 3), _seg(A, C)), (Fraction(1, 3), _seg(B, D))],
                   "vertex mean/diagonals mix")]


def _par_lower64(p: Parallelogram):
    return enumerate_lower_bounds(p.quarters)


def _par_midlines(p: Parallelogram):
    A, B, C, D = p.vertices
    O = p.O
    hD, hB = Homothety(D, 2 / 3), Homothety(B, 2 / 3)
    segs = [_seg(hD(A), hD(O)), _seg(hD(O), hD(C)), _seg(hB(A), hB(O)), _seg(hB(O), hB(C))]
    return [_lower(p.body, [(Fraction(1, 4), s) for s in segs], "four segments through barycenters")]


def _par_scaled_boundary(p: Parallelogram):
    h = Homothety(p.O, 2 / 3)
    V = [h(v) for v in p.vertices]
    return [_lower(p.body, [(Fraction(1, 4), _seg(V[k], V[(k + 1) % 4])) for k in range(4)],
                   "scaled boundary sides")]


def _par_barycenters(p: Parallelogram):
    return [_lower(p.body, [(1, points([barycenter(t) for t in p.quarters]))], "triangle barycenters")]


def _par_center(p: Parallelogram):
    return [_lower(p.body, [(1, _pt(p.O))], "center <= average")]


# ---------------------------------------------------------------------------
# nice polygons and fans


def _sector_bound(sectors, part, label, target):
    return [aggregate(UPPER, sectors, part, label, target)]


def _poly1(p):
    # sector triangle vertices: 0 = O, 1 = A_k, 2 = A_k+1
    return _sector_bound(p.sectors, lambda i, s: _R_part(s, {0}, {1, 2}), "center/side mix", p.body)


def _poly2(p):
    return _sector_bound(p.sectors, lambda i, s: _R_part(s, {1}, {0, 2}), "vertex/spoke mix", p.body)


def _poly_vertices(p):
    return _sector_bound(p.sectors, lambda i, s: [(Fraction(1, 3), _pt(v)) for v in s.vertices],
                         "center/vertex mix", p.body)


def _polyinv(p):
    return [aggregate(LOWER, p.sectors, lambda i, s: _L_part(s, {0}), "scaled sides", p.body)]


def _poly_vn_upper(p: NicePolygon):
    return [_upper(p.body, [(Fraction(1, 3), _pt(p.center)), (Fraction(2, 3), p.boundary)],
                   "center/perimeter mix")]


def _poly_vn_lower(p: NicePolygon):
    return [_lower(p.body, [(1, _scaled(p.center, 2 / 3, p.boundary))], "scaled perimeter")]


def _parity_part(sh, parity):
    """Per sector: the vertex of the other parity against the spoke to the vertex of this parity.

    Vertices are numbered from 1 on polygons and fans alike.
    """
    def part(i, s):
        spoke = 1 if (i + 1) % 2 == parity else 2
        other = 3 - spoke
        return _R_part(s, {other}, {0, spoke})
    return part


def _poly2n(parity):
    def gen(p):
        return [aggregate(UPPER, p.sectors, _parity_part(p, parity),
                          f"vertices {'odd' if parity == 0 else 'even'}, "
                          f"spokes {'even' if parity == 0 else 'odd'}", p.body)]
    return gen


# ---------------------------------------------------------------------------
# annulus


def _chen_radius(a: Annulus) -> float:
    r, R = a.r, a.R
    return 2 * (r * r + r * R + R * R) / (3 * (r + R))


def _chen_lower(a: Annulus):
    return [_lower(a.body, [(1, a.circle(_chen_radius(a)))], "single circle")]


def _chen_upper(a: Annulus):
    r, R = a.r, a.R
    return [_upper(a.body, [((2 * r + R) / (3 * (r + R)), a.circle(r)),
                            ((r + 2 * R) / (3 * (r + R)), a.circle(R))], "inner/outer circles")]


def _usL_pairs(a: Annulus):
    r, R = a.r, a.R
    return [(R / (r + R), a.circle((r + 2 * R) / 3)), (r / (r + R), a.circle((2 * r + R) / 3))]


def _usL(a: Annulus):
    return [_lower(a.body, _usL_pairs(a), "two barycentric circles")]


def _usR(a: Annulus):
    r, R = a.r, a.R
    pairs = [(w / 3, c) for w, c in _usL_pairs(a)]
    pairs += [(2 * (r + 2 * R) / (9 * (r + R)), a.circle(R)),
              (2 * (2 * r + R) / (9 * (r + R)), a.circle(r))]
    return [_upper(a.body, pairs, "barycentric and boundary circles")]


def annulus_discrete(a: Annulus, n: int) -> BoundExpression:
    """Lower bound on the inscribed mesh D_n by its triangle barycenters."""
    m = a.mesh(n)
    wK, wL = m.barycenter_weights()
    return _lower(m.body, [(wK, points([barycenter(t) for t in m.K])),
                           (wL, points([barycenter(t) for t in m.L]))], f"mesh barycenters n={n}")


def _annulus_Dn(a: Annulus):
    return [annulus_discrete(a, DEFAULT_MESH_N)]


# ---------------------------------------------------------------------------
# Platonic bodies and star polytopes
# tetrahedron vertex order: 0 = O, 1 = face apex, 2 = A_k, 3 = A_k+1


def _plato(kind):
    def gen(b: PlatonicBody):
        simplices = [s for s, *_ in b.simplices()]
        if kind == 1:
            return [aggregate(UPPER, simplices, lambda i, s: _R_part(s, {0}, {1, 2, 3}), "center/boundary mix")]
        if kind == 2:
            return [aggregate(UPPER, simplices, lambda i, s: _R_part(s, {0, 1}, {2, 3}), "apex spokes/edges mix")]
        if kind == 3:
            return [aggregate(UPPER, simplices, lambda i, s: _R_part(s, {0, 2}, {1, 3}), "vertex spokes/face spokes mix")]
        return [aggregate(LOWER, simplices, lambda i, s: _L_part(s, {0}), "scaled boundary")]
    return gen


# ---------------------------------------------------------------------------
# dipyramids and dicones


def _dip_apex_upper(which):
    def gen(d):
        hA, hB = (d.h0, d.h1) if which == 0 else (d.h1, d.h0)
        return [_upper(d.body, [(Fraction(1, 4), _pt(d.apex(hA))), (Fraction(3, 4), d.umbrella(hB))],
                       "apex/opposite umbrella mix")]
    return gen


def _dip_apex_lower(which):
    def gen(d):
        hA, hB = (d.h0, d.h1) if which == 0 else (d.h1, d.h0)
        return [_lower(d.body, [(1, _scaled(d.apex(hA), 3 / 4, d.umbrella(hB)))], "scaled opposite umbrella")]
    return gen


def _dip_axis(d):
    return [_upper(d.body, [(Fraction(1, 2), _seg(d.O0, d.O1)), (Fraction(1, 2), d.base_boundary)],
                   "axis/base perimeter mix")]


def _dip_sticks(d: Dipyramid):
    return [_upper(d.body, [(Fraction(1, 2), d.scaffold(d.h0)), (Fraction(1, 2), d.scaffold(d.h1))],
                   "scaffolds mix")]


def _dicone_weighted(d: Dicone):
    c, e = d.axis
    aw = AxisWeight(tuple(c), tuple(e), d.radius / 2)
    half = Fraction(1, 2)
    return [BoundExpression(UPPER, d.body, (Term(half, d.umbrella(d.h0), aw), Term(half, d.umbrella(d.h1), aw)),
                            "distance-weighted umbrellas")]


def _h(d, s):
    return (1 - s) * d.h0 + s * d.h1


def _dip_s_upper(d, s):
    return _upper(d.body, [(Fraction(1, 4), _pt(d.apex(_h(d, s)))),
                           (3 * s / 4, d.umbrella(d.h0)), (3 * (1 - s) / 4, d.umbrella(d.h1))],
                  f"split apex mix s={s}")


def _dip_s_inv1(d, s):
    Os = d.apex(_h(d, s))
    return _lower(d.body, [(s, _scaled(Os, 3 / 4, d.umbrella(d.h0))),
                           ((1 - s), _scaled(Os, 3 / 4, d.umbrella(d.h1)))], f"split scaled umbrellas s={s}")


def _dip_s_inv2(d, s):
    Os = d.apex(_h(d, s))
    part0, part1 = dipyramid_split(d, s)
    e0, e1 = d.sin_eta(d.h0), d.sin_eta(d.h1)
    target = _scaled(Os, 3 / 4, d.umbrella(d.h0)) | _scaled(Os, 3 / 4, d.umbrella(d.h1))
    return _upper(target, [(e1 / (e0 + e1), part0.body), (e0 / (e0 + e1), part1.body)],
                  f"scaled boundary vs split parts s={s}")


def _splits(fn):
    def gen(d):
        return [fn(d, s) for s in DEFAULT_SPLITS]
    return gen


def balanced_split(d) -> float:
    """Split parameter at which the umbrella weights equal their area shares."""
    e0, e1 = d.sin_eta(d.h0), d.sin_eta(d.h1)
    return e1 / (e0 + e1)


def _dip_cor_upper(d):
    s = balanced_split(d)
    return [_upper(d.body, [(Fraction(1, 4), _pt(d.apex(_h(d, s)))),
                            (Fraction(3, 4), d.umbrella(d.h0) | d.umbrella(d.h1))],
                   "balanced split apex/boundary mix")]


def _dip_cor_lower(d):
    s = balanced_split(d)
    Os = d.apex(_h(d, s))
    return [_lower(d.body, [(1, _scaled(Os, 3 / 4, d.umbrella(d.h0) | d.umbrella(d.h1)))],
                   "balanced split scaled boundary")]


# ---------------------------------------------------------------------------
# cube


def _cube_face_simplices(c: CubeSplit):
    """Per face ABCD with A in {O1, O2}: simplices ABCO and ACDO (O at index 3)."""
    ends = (c.o1, c.o1 ^ 7)
    out = []
    for F in c.faces():
        j = next(i for i, v in enumerate(F) if v in ends)
        A, B, C, D = (c.vertex(F[(j + m) % 4]) for m in range(4))
        out.append(Simplex((A, B, C, c.center)))
        out.append(Simplex((A, C, D, c.center)))
    return out


def _cube3(c: CubeSplit):
    # vertices 0 = A, 1 = B or C, 2 = C or D, 3 = O; the diagonal is AC
    def part(i, s):
        return _R_part(s, {0, 2}, {1, 3}) if i % 2 == 0 else _R_part(s, {0, 1}, {2, 3})
    return [aggregate(UPPER, _cube_face_simplices(c), part, "face diagonals/main diagonals mix")]


def _cube4(c: CubeSplit):
    def part(i, s):
        return _R_part(s, {2, 3}, {0, 1}) if i % 2 == 0 else _R_part(s, {1, 3}, {0, 2})
    return [aggregate(UPPER, _cube_face_simplices(c), part, "edges/main diagonals mix")]


def _split_part(c: CubeSplit, want_edges: bool):
    # simplex vertices 0 = O1, 1 = O2, 2 = V_k, 3 = V_k+1
    def part(i, s):
        a = math.dist(s.vertices[0], s.vertices[2])
        o1_vk_is_edge = math.isclose(a, c.edge, rel_tol=1e-9)
        if o1_vk_is_edge == want_edges:
            return _R_part(s, {0, 2}, {1, 3})
        return _R_part(s, {0, 3}, {1, 2})
    return part


def _cube5_1(c: CubeSplit):
    return [aggregate(UPPER, c.split, lambda i, s: _R_part(s, {0, 1}, {2, 3}), "main diagonal/ring mix")]


def _cube5_2(c: CubeSplit):
    return [aggregate(UPPER, c.split, _split_part(c, False), "face diagonals at O1, O2")]


def _cube5_3(c: CubeSplit):
    return [aggregate(UPPER, c.split, _split_part(c, True), "edges at O1, O2")]


def _cube6_simplices(c: CubeSplit):
    A = c.vertex(c.o1)
    out = []
    for F in c.faces():
        if c.o1 in F:
            continue
        P = [c.vertex(i) for i in F]
        out += [Simplex((A, P[0], P[1], P[2])), Simplex((A, P[0], P[2], P[3]))]
    return out


def _cube6_1(c: CubeSplit):
    return [aggregate(UPPER, _cube6_simplices(c), lambda i, s: _R_part(s, {0}, {1, 2, 3}),
                      "vertex/far faces mix")]


def _cube6_2(c: CubeSplit):
    return [aggregate(LOWER, _cube6_simplices(c), lambda i, s: _L_part(s, {0}), "scaled far faces")]


# ---------------------------------------------------------------------------
# registry


def _is_segment(sh: SimplexShape) -> bool:
    return sh.simplex.dim == 1


def _is_multi(sh: SimplexShape) -> bool:
    return sh.simplex.dim >= 2


def _E(id, anchor, family, shape_type, hyp, gen, **kw):
    return CatalogEntry(id, anchor, family, shape_type, hyp, gen, **kw)


ENTRIES: tuple[CatalogEntry, ...] = (
    _E("hh1_lower", "segment midpoint lower bound", "classic", SimplexShape, WHOLE, _simplex_lower, predicate=_is_segment),
    _E("hh1_upper", "segment endpoint upper bound", "classic", SimplexShape, WHOLE, _simplex_upper, predicate=_is_segment),
    _E("hh1_strong", "segment midpoint/endpoint upper bound", "classic", SimplexShape, WHOLE, _simplex_strong, predicate=_is_segment),
    _E("simplex_lower", "simplex barycenter lower bound", "classic", SimplexShape, WHOLE, _simplex_lower, predicate=_is_multi),
    _E("simplex_upper", "simplex vertex-mean upper bound", "classic", SimplexShape, WHOLE, _simplex_upper, predicate=_is_multi),
    _E("simplex_strong", "simplex barycenter/vertex-mean upper bound", "classic", SimplexShape, WHOLE, _simplex_strong, predicate=_is_multi),
    _E("disk_lower", "disk center lower bound", "classic", DiskShape, WHOLE, _round_lower),
    _E("disk_upper", "disk boundary upper bound", "classic", DiskShape, WHOLE, _round_upper),
    _E("disk_strong", "disk center/boundary upper bound", "classic", DiskShape, WHOLE, _round_strong),
    _E("ball_lower", "ball center lower bound", "classic", BallShape, WHOLE, _round_lower),
    _E("ball_upper", "ball sphere upper bound", "classic", BallShape, WHOLE, _round_upper),
    _E("ball_strong", "ball center/sphere upper bound", "classic", BallShape, WHOLE, _round_strong),
    _E("ngon_strong", "regular polygon center/perimeter upper bound", "classic", NicePolygon, WHOLE, _ngon_strong, predicate=_is_regular),
    _E("thR", "face partition upper bound", "simplex", SimplexShape, WHOLE, _thR),
    _E("thL", "homothetic sub-simplex lower chain", "simplex", SimplexShape, WHOLE, _thL),
    _E("quad_AC", "quadrilateral diagonal upper bound", "quadrilateral", QuadrilateralEH, cells("halves"), _quad_AC),
    _E("quad_AC_vertices", "quadrilateral diagonal vertex upper bound", "quadrilateral", QuadrilateralEH, cells("halves"), _quad_AC_vertices),
    _E("ABCDO1", "quadrilateral center/side upper bound", "quadrilateral", QuadrilateralEH, cells("quarters"), _ABCDO1),
    _E("ABCDO2", "quadrilateral center/vertex upper bound", "quadrilateral", QuadrilateralEH, cells("quarters"), _ABCDO2),
    _E("quad_lower16", "quadrilateral sub-simplex lower bounds", "quadrilateral", QuadrilateralEH, cells("halves"), _quad_lower16),
    _E("quad_PQ_QR", "quadrilateral segments through both barycenters", "quadrilateral", QuadrilateralEH, cells("halves"), _quad_PQ_QR),
    _E("par_min_diag", "parallelogram best diagonal upper bound", "parallelogram", Parallelogram, cells("quarters"), _par_min_diag, reducer="min"),
    _E("par_min_vertex", "parallelogram best diagonal vertex upper bound", "parallelogram", Parallelogram, WHOLE, _par_min_vertex, reducer="min"),
    _E("par_vertex_mean", "parallelogram vertex-mean upper bound", "parallelogram", Parallelogram, WHOLE, _par_vertex_mean),
    _E("par_diagonals", "parallelogram vertex/diagonal upper bound", "parallelogram", Parallelogram, cells("quarters"), _par_diagonals),
    _E("par_lower64", "parallelogram sub-simplex lower bounds", "parallelogram", Parallelogram, cells("quarters"), _par_lower64),
    _E("par_midlines", "parallelogram barycentric segment lower bound", "parallelogram", Parallelogram, cells("quarters"), _par_midlines),
    _E("par_scaled_boundary", "parallelogram scaled boundary lower bound", "parallelogram", Parallelogram, cells("quarters"), _par_scaled_boundary),
    _E("par_barycenters", "parallelogram triangle barycenter lower bound", "parallelogram", Parallelogram, cells("quarters"), _par_barycenters),
    _E("par_center", "parallelogram center lower bound", "parallelogram", Parallelogram, WHOLE, _par_center),
    _E("poly1", "nice polygon center/side upper bound", "polygon", NicePolygon, cells("sectors"), _poly1),
    _E("poly2", "nice polygon vertex/spoke upper bound", "polygon", NicePolygon, cells("sectors"), _poly2),
    _E("poly", "nice polygon center/vertex upper bound", "polygon", NicePolygon, cells("sectors"), _poly_vertices),
    _E("polyinv", "nice polygon scaled side lower bound", "polygon", NicePolygon, cells("sectors"), _polyinv),
    _E("poly_vn_upper", "very nice polygon perimeter upper bound", "polygon", NicePolygon, cells("sectors"), _poly_vn_upper,
       predicate=lambda p: p.very_nice),
    _E("poly_vn_lower", "very nice polygon scaled perimeter lower bound", "polygon", NicePolygon, cells("sectors"), _poly_vn_lower,
       predicate=lambda p: p.very_nice),
    _E("poly2n_odd", "even polygon odd vertex/even spoke upper bound", "polygon", NicePolygon, cells("sectors"), _poly2n(0),
       predicate=lambda p: p.n % 2 == 0),
    _E("poly2n_even", "even polygon even vertex/odd spoke upper bound", "polygon", NicePolygon, cells("sectors"), _poly2n(1),
       predicate=lambda p: p.n % 2 == 0),
    _E("fan1", "fan center/side upper bound", "fan", Fan, cells("sectors"), _poly1),
    _E("fan2", "fan vertex/spoke upper bound", "fan", Fan, cells("sectors"), _poly2),
    _E("fan", "fan center/vertex upper bound", "fan", Fan, cells("sectors"), _poly_vertices),
    _E("faninv", "fan scaled side lower bound", "fan", Fan, cells("sectors"), _polyinv),
    _E("fan2n_odd", "fan odd vertex/even spoke upper bound", "fan", Fan, cells("sectors"), _poly2n(0)),
    _E("fan2n_even", "fan even vertex/odd spoke upper bound", "fan", Fan, cells("sectors"), _poly2n(1)),
    _E("chen_lower", "annulus single circle lower bound", "annulus", Annulus, WHOLE, _chen_lower),
    _E("chen_upper", "annulus inner/outer circle upper bound", "annulus", Annulus, WHOLE, _chen_upper),
    _E("usL", "annulus barycentric circles lower bound", "annulus", Annulus, SECTORS, _usL),
    _E("usR", "annulus barycentric/boundary circles upper bound", "annulus", Annulus, SECTORS, _usR),
    _E("annulus_Dn", "inscribed annulus mesh barycenter lower bound", "annulus", Annulus, WHOLE, _annulus_Dn),
    _E("Plato_1", "Platonic center/boundary upper bound", "platonic", PlatonicBody, cells("pyramids"), _plato(1), exact_type=True),
    _E("Plato_2", "Platonic face spokes/edges upper bound", "platonic", PlatonicBody, cells("pyramids"), _plato(2), exact_type=True),
    _E("Plato_3", "Platonic vertex spokes/face spokes upper bound", "platonic", PlatonicBody, cells("pyramids"), _plato(3), exact_type=True),
    _E("Plato_4", "Platonic scaled boundary lower bound", "platonic", PlatonicBody, cells("pyramids"), _plato(4), exact_type=True),
    _E("Plato_star_1", "star polytope center/boundary upper bound", "star", StarPolytope, cells("tetrahedra"), _plato(1)),
    _E("Plato_star_2", "star polytope apex spokes/edges upper bound", "star", StarPolytope, cells("tetrahedra"), _plato(2)),
    _E("Plato_star_3", "star polytope vertex spokes/apex spokes upper bound", "star", StarPolytope, cells("tetrahedra"), _plato(3)),
    _E("Plato_star_4", "star polytope scaled boundary lower bound", "star", StarPolytope, cells("tetrahedra"), _plato(4)),
    _E("dip_O0", "dipyramid first apex/umbrella upper bound", "dipyramid", Dipyramid, cells("simplices"), _dip_apex_upper(0)),
    _E("dip_O1", "dipyramid second apex/umbrella upper bound", "dipyramid", Dipyramid, cells("simplices"), _dip_apex_upper(1)),
    _E("dip_O0_inv", "dipyramid scaled umbrella lower bound at first apex", "dipyramid", Dipyramid, cells("simplices"), _dip_apex_lower(0)),
    _E("dip_O1_inv", "dipyramid scaled umbrella lower bound at second apex", "dipyramid", Dipyramid, cells("simplices"), _dip_apex_lower(1)),
    _E("dip_axis", "dipyramid axis/base perimeter upper bound", "dipyramid", Dipyramid, cells("simplices"), _dip_axis),
    _E("dip_sticks", "dipyramid scaffold upper bound", "dipyramid", Dipyramid, cells("simplices"), _dip_sticks),
    _E("dip_s_upper", "dipyramid split apex upper bound", "dipyramid", Dipyramid, cells("simplices"), _splits(_dip_s_upper)),
    _E("dip_s_inv1", "dipyramid split scaled umbrella lower bound", "dipyramid", Dipyramid, cells("simplices"), _splits(_dip_s_inv1)),
    _E("dip_s_inv2", "dipyramid split scaled boundary bound", "dipyramid", Dipyramid, cells("simplices"), _splits(_dip_s_inv2)),
    _E("dip_star_upper", "dipyramid balanced split upper bound", "dipyramid", Dipyramid, cells("simplices"), _dip_cor_upper),
    _E("dip_star_lower", "dipyramid balanced split lower bound", "dipyramid", Dipyramid, cells("simplices"), _dip_cor_lower),
    _E("dicone_O0", "dicone first apex/cone upper bound", "dicone", Dicone, WHOLE, _dip_apex_upper(0)),
    _E("dicone_O1", "dicone second apex/cone upper bound", "dicone", Dicone, WHOLE, _dip_apex_upper(1)),
    _E("dicone_O0_inv", "dicone scaled cone lower bound at first apex", "dicone", Dicone, WHOLE, _dip_apex_lower(0)),
    _E("dicone_O1_inv", "dicone scaled cone lower bound at second apex", "dicone", Dicone, WHOLE, _dip_apex_lower(1)),
    _E("dicone_axis", "dicone axis/base circle upper bound", "dicone", Dicone, WHOLE, _dip_axis),
    _E("dicone_weighted", "dicone distance-weighted cone upper bound", "dicone", Dicone, WHOLE, _dicone_weighted),
    _E("dicone_s_upper", "dicone split apex upper bound", "dicone", Dicone, WHOLE, _splits(_dip_s_upper)),
    _E("dicone_s_inv1", "dicone split scaled cone lower bound", "dicone", Dicone, WHOLE, _splits(_dip_s_inv1)),
    _E("dicone_s_inv2", "dicone split scaled boundary bound", "dicone", Dicone, WHOLE, _splits(_dip_s_inv2)),
    _E("dicone_star_upper", "dicone balanced split upper bound", "dicone", Dicone, WHOLE, _dip_cor_upper),
    _E("dicone_star_lower", "dicone balanced split lower bound", "dicone", Dicone, WHOLE, _dip_cor_lower),
    _E("cube3", "cube face diagonal/main diagonal upper bound", "cube", CubeSplit, cells("pyramids"), _cube3),
    _E("cube4", "cube edge/main diagonal upper bound", "cube", CubeSplit, cells("pyramids"), _cube4),
    _E("cube5_1", "diagonal split axis/ring upper bound", "cube", CubeSplit, cells("split"), _cube5_1),
    _E("cube5_2", "diagonal split face diagonal upper bound", "cube", CubeSplit, cells("split"), _cube5_2),
    _E("cube5_3", "diagonal split edge upper bound", "cube", CubeSplit, cells("split"), _cube5_3),
    _E("cube6_1", "cube vertex/far faces upper bound", "cube", CubeSplit, WHOLE, _cube6_1),
    _E("cube6_2", "cube scaled far faces lower bound", "cube", CubeSplit, WHOLE, _cube6_2),
)

_BY_ID = {e.id: e for e in ENTRIES}
if len(_BY_ID) != len(ENTRIES):
    raise RuntimeError("duplicate catalog ids")


def get(entry_id: str) -> CatalogEntry:
    try:
        return _BY_ID[entry_id]
    except KeyError:
        raise CatalogError(f"unknown entry id {entry_id!r}") from None


def entries_for(shape: Shape) -> list[CatalogEntry]:
    return [e for e in ENTRIES if e.applies(shape) is not None]


def manifest() -> list[dict]:
    return [e.manifest() for e in sorted(ENTRIES, key=lambda e: e.id)]


__all__ = [
    "CatalogEntry", "CatalogError", "Hypothesis", "ENTRIES", "WHOLE", "SECTORS", "cells",
    "get", "entries_for", "manifest", "aggregate", "pooled", "annulus_discrete",
    "balanced_split",
]
