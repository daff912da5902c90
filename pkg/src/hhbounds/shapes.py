"""Validated figures and bodies with their canonical decompositions.

Every shape exposes ``body`` (the region whose average is bounded), the
named cell decompositions used as convexity hypotheses, and ``to_dict``
for the JSON shape spec.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields
from typing import ClassVar, Optional

import numpy as np
from scipy.spatial import ConvexHull

from .geometry import (
    AnnulusSector, Ball, Circle, ConePatch, ConeSolid, GeometryError, Region, Simplex, Sphere,
    as_point, boundary_segments, segment, triangle,
)

AREA_RTOL = 1e-10
LENGTH_RTOL = 1e-10
VOLUME_RTOL = 1e-10
PARALLEL_ATOL = 1e-12
E3 = (0.0, 0.0, 1.0)


class ShapeError(ValueError):
    pass


def _cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _mid(a, b):
    return tuple((x + y) / 2 for x, y in zip(a, b))


def _close(a, b, rtol) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b))


def _pts(seq, d=None):
    out = tuple(as_point(p) for p in seq)
    if d is not None and any(len(p) != d for p in out):
        raise ShapeError(f"expected points in R^{d}")
    return out


@dataclass(frozen=True)
class CellComplex:
    """Named convex cells of a shape.

    ``simplices`` is set for a conforming simplicial mesh; ``apex`` and
    ``facets`` for cones over boundary facets from a common apex.
    """

    cells: tuple
    simplices: Optional[np.ndarray] = None
    apex: Optional[tuple] = None
    facets: Optional[np.ndarray] = None

    @classmethod
    def simplicial(cls, simplices):
        S = np.asarray([np.asarray(s.vertices if isinstance(s, Simplex) else s, dtype=float)
                        for s in simplices])
        return cls(tuple(S), simplices=S)

    @classmethod
    def conical(cls, apex, facets, cells):
        return cls(tuple(np.asarray(c, dtype=float) for c in cells), apex=tuple(apex),
                   facets=np.asarray(facets, dtype=float))


class Shape:
    kind: ClassVar[str] = ""

    @property
    def body(self) -> Region:
        raise NotImplementedError

    def cell_complex(self, name: str) -> CellComplex:
        raise ShapeError(f"{self.kind} has no cell decomposition {name!r}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for f in fields(self):
            if f.init:
                v = getattr(self, f.name)
                out[f.name] = _jsonable(v)
        return out


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and v.is_integer():
        return v
    return v


# ---------------------------------------------------------------------------
# simplices, disks, balls


@dataclass(frozen=True)
class SimplexShape(Shape):
    kind: ClassVar[str] = "simplex"
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", _pts(self.vertices))
        try:
            s = Simplex(self.vertices)
        except GeometryError as exc:
            raise ShapeError(str(exc)) from None
        if s.dim != s.ambient:
            raise ShapeError("simplex shape must be full-dimensional")
        object.__setattr__(self, "_s", s)

    @property
    def simplex(self) -> Simplex:
        return self._s

    @property
    def body(self) -> Region:
        return Region.of(self._s)

    def cell_complex(self, name):
        if name == "whole":
            return CellComplex.simplicial([self._s])
        return super().cell_complex(name)


@dataclass(frozen=True)
class DiskShape(Shape):
    kind: ClassVar[str] = "disk"
    radius: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 2 or not self.radius > 0:
            raise ShapeError("disk needs a planar center and positive radius")

    @property
    def body(self):
        return Region.of(AnnulusSector(self.center, 0.0, self.radius))

    @property
    def boundary(self):
        return Region.of(Circle(self.center, self.radius))


@dataclass(frozen=True)
class BallShape(Shape):
    kind: ClassVar[str] = "ball"
    radius: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3 or not self.radius > 0:
            raise ShapeError("ball needs a center in R^3 and positive radius")

    @property
    def body(self):
        return Region.of(Ball(self.center, self.radius))

    @property
    def boundary(self):
        return Region.of(Sphere(self.center, self.radius))


# ---------------------------------------------------------------------------
# quadrilaterals


@dataclass(frozen=True)
class QuadrilateralEH(Shape):
    """Quadrilateral ABCD whose diagonal AC splits it into equal areas."""

    kind: ClassVar[str] = "quadrilateral"
    vertices: tuple

    def __post_init__(self):
        V = _pts(self.vertices, 2)
        if len(V) != 4:
            raise ShapeError("quadrilateral needs four vertices")
        object.__setattr__(self, "vertices", V)
        A, B, C, D = V
        s1, s2 = _cross2(A, B, C), _cross2(A, C, D)
        if s1 == 0 or s2 == 0 or (s1 > 0) != (s2 > 0):
            raise ShapeError("B and D must lie strictly on opposite sides of AC")
        if not _close(abs(s1), abs(s2), AREA_RTOL):
            raise ShapeError(f"AC does not halve area: ratio {abs(s1) / abs(s2):.6g}")

    A = property(lambda self: self.vertices[0])
    B = property(lambda self: self.vertices[1])
    C = property(lambda self: self.vertices[2])
    D = property(lambda self: self.vertices[3])

    @property
    def O(self):
        return _mid(self.A, self.C)

    @property
    def halves(self):
        A, B, C, D = self.vertices
        return (triangle(A, B, C), triangle(A, C, D))

    @property
    def quarters(self):
        """Triangles AOB, BOC, COD, DOA."""
        A, B, C, D = self.vertices
        O = self.O
        return (triangle(A, O, B), triangle(B, O, C), triangle(C, O, D), triangle(D, O, A))

    @property
    def body(self):
        return Region(self.halves)

    def cell_complex(self, name):
        if name == "halves":
            return CellComplex.simplicial(self.halves)
        if name == "quarters":
            return CellComplex.simplicial(self.quarters)
        return super().cell_complex(name)


@dataclass(frozen=True)
class Parallelogram(QuadrilateralEH):
    kind: ClassVar[str] = "parallelogram"

    def __post_init__(self):
        V = _pts(self.vertices, 2)
        if len(V) != 4:
            raise ShapeError("parallelogram needs four vertices")
        A, B, C, D = (np.asarray(p) for p in V)
        scale = max(np.abs(np.asarray(V)).max(), 1.0)
        if np.abs(A + C - B - D).max() > PARALLEL_ATOL * scale:
            raise ShapeError("diagonals do not bisect each other (A + C != B + D)")
        super().__post_init__()

    @property
    def body(self):
        return Region(self.quarters)



# ---------------------------------------------------------------------------
# nice polygons and fans


@dataclass(frozen=True)
class NicePolygon(Shape):
    """Polygon with a kernel point O making all triangles O A_k A_k+1 equal in area."""

    kind: ClassVar[str] = "nice_polygon"
    vertices: tuple
    center: tuple

    def __post_init__(self):
        V = _pts(self.vertices, 2)
        O = as_point(self.center)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "center", O)
        n = len(V)
        if n < 3:
            raise ShapeError("polygon needs at least three vertices")
        areas = [_cross2(O, V[k], V[(k + 1) % n]) / 2 for k in range(n)]
        if min(areas) <= 0:
            raise ShapeError("center is not in the kernel (triangle O A_k A_k+1 not positively oriented)")
        if not _close(min(areas), max(areas), AREA_RTOL):
            raise ShapeError(f"triangles O A_k A_k+1 differ in area: {min(areas):.6g} vs {max(areas):.6g}")
        total = sum(areas)
        angle = sum(math.atan2(_cross2(O, V[k], V[(k + 1) % n]),
                               np.dot(np.subtract(V[k], O), np.subtract(V[(k + 1) % n], O)))
                    for k in range(n))
        if not math.isclose(angle, 2 * math.pi, rel_tol=1e-9):
            raise ShapeError("polygon winds around its center more than once")
        object.__setattr__(self, "_area", total)

    @classmethod
    def regular(cls, n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0):
        c = as_point(center)
        V = [(c[0] + radius * math.cos(phase + 2 * math.pi * k / n),
              c[1] + radius * math.sin(phase + 2 * math.pi * k / n)) for k in range(n)]
        return cls(tuple(V), c)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def very_nice(self) -> bool:
        V = self.vertices
        L = [math.dist(V[k], V[(k + 1) % self.n]) for k in range(self.n)]
        return _close(min(L), max(L), LENGTH_RTOL)

    @property
    def sectors(self):
        V, O = self.vertices, self.center
        return tuple(triangle(O, V[k], V[(k + 1) % self.n]) for k in range(self.n))

    @property
    def body(self):
        return Region(self.sectors)

    @property
    def boundary(self):
        return boundary_segments(self.vertices)

    def doubled(self) -> "NicePolygon":
        """The same polygon with side midpoints added as vertices."""
        V = self.vertices
        W = []
        for k in range(self.n):
            W += [V[k], _mid(V[k], V[(k + 1) % self.n])]
        return NicePolygon(tuple(W), self.center)

    def cell_complex(self, name):
        if name == "sectors":
            return CellComplex.simplicial(self.sectors)
        return super().cell_complex(name)


@dataclass(frozen=True)
class Fan(Shape):
    """Triangles O A_k A_k+1 (k = 1..n-1) of one orientation and equal area."""

    kind: ClassVar[str] = "fan"
    center: tuple
    vertices: tuple

    def __post_init__(self):
        V = _pts(self.vertices, 2)
        O = as_point(self.center)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "center", O)
        if len(V) < 2:
            raise ShapeError("fan needs at least two outer vertices")
        areas = [_cross2(O, V[k], V[k + 1]) / 2 for k in range(len(V) - 1)]
        if min(areas) * max(areas) <= 0 or min(abs(a) for a in areas) == 0:
            raise ShapeError("fan triangles are not of the same orientation")
        if not _close(min(areas, key=abs), max(areas, key=abs), AREA_RTOL):
            raise ShapeError("fan triangles differ in area")
        total = sum(abs(math.atan2(_cross2(O, V[k], V[k + 1]),
                                   np.dot(np.subtract(V[k], O), np.subtract(V[k + 1], O))))
                    for k in range(len(V) - 1))
        if total >= 2 * math.pi:
            raise ShapeError(f"fan angles sum to {total:.6g} >= 2 pi")

    @property
    def sectors(self):
        V, O = self.vertices, self.center
        return tuple(triangle(O, V[k], V[k + 1]) for k in range(len(V) - 1))

    @property
    def body(self):
        return Region(self.sectors)

    def cell_complex(self, name):
        if name == "sectors":
            return CellComplex.simplicial(self.sectors)
        return super().cell_complex(name)


# ---------------------------------------------------------------------------
# annulus


@dataclass(frozen=True)
class Annulus(Shape):
    kind: ClassVar[str] = "annulus"
    r: float
    R: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 2:
            raise ShapeError("annulus needs a planar center")
        if not (0 < self.r < self.R):
            raise ShapeError(f"annulus needs 0 < r < R, got r={self.r}, R={self.R}")

    @property
    def body(self):
        return Region.of(AnnulusSector(self.center, self.r, self.R))

    def circle(self, s: float) -> Region:
        return Region.of(Circle(self.center, s))

    def mesh(self, n: int) -> "AnnulusMesh":
        return AnnulusMesh(self, n)


@dataclass(frozen=True)
class AnnulusMesh:
    """Inscribed outer n-gon and inner n-gon rotated by pi/n, split into 2n triangles."""

    annulus: Annulus
    n: int

    def __post_init__(self):
        n, r, R = self.n, self.annulus.r, self.annulus.R
        if n < 5:
            raise ShapeError(f"annulus mesh needs n >= 5, got {n}")
        if R * math.cos(math.pi / n) <= r:
            raise ShapeError("inner polygon crosses the outer one (R cos(pi/n) <= r)")

    def _ring(self, radius, offset):
        cx, cy = self.annulus.center
        return [(cx + radius * math.cos(2 * math.pi * k / self.n + offset),
                 cy + radius * math.sin(2 * math.pi * k / self.n + offset)) for k in range(self.n)]

    @property
    def outer(self):
        return self._ring(self.annulus.R, 0.0)

    @property
    def inner(self):
        return self._ring(self.annulus.r, math.pi / self.n)

    @property
    def K(self):
        A, B, n = self.outer, self.inner, self.n
        return tuple(triangle(A[k], A[(k + 1) % n], B[k]) for k in range(n))

    @property
    def L(self):
        A, B, n = self.outer, self.inner, self.n
        return tuple(triangle(B[k], B[(k + 1) % n], A[(k + 1) % n]) for k in range(n))

    @property
    def body(self):
        return Region(self.K + self.L)

    def closed_form_areas(self):
        n, r, R = self.n, self.annulus.r, self.annulus.R
        s, c = math.sin(math.pi / n), math.cos(math.pi / n)
        return R * s * (R * c - r), r * s * (R - r * c), n * s * c * (R * R - r * r)

    def barycenter_weights(self):
        """Weights of the K- and L-barycenter means in the discrete lower bound."""
        n, r, R = self.n, self.annulus.r, self.annulus.R
        c = math.cos(math.pi / n)
        den = c * (R * R - r * r)
        return R * (R * c - r) / den, r * (R - r * c) / den


# ---------------------------------------------------------------------------
# Platonic bodies and star polytopes

_PHI = (1 + 5 ** 0.5) / 2


def _canonical_vertices(body: str) -> np.ndarray:
    if body == "tetra":
        V = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif body == "cube":
        V = list(itertools.product((-1, 1), repeat=3))
    elif body == "octa":
        V = [tuple(s * (i == j) for j in range(3)) for i in range(3) for s in (1, -1)]
    elif body == "icosa":
        V = []
        for a, b in itertools.product((-1, 1), repeat=2):
            V += [(0, a, b * _PHI), (a, b * _PHI, 0), (b * _PHI, 0, a)]
    elif body == "dodeca":
        V = list(itertools.product((-1, 1), repeat=3))
        for a, b in itertools.product((-1, 1), repeat=2):
            V += [(0, a / _PHI, b * _PHI), (a / _PHI, b * _PHI, 0), (b * _PHI, 0, a / _PHI)]
    else:
        raise ShapeError(f"unknown Platonic body {body!r}")
    V = np.asarray(V, dtype=float)
    return V / np.linalg.norm(V[0])


def _faces(V: np.ndarray) -> list[list[int]]:
    """Vertex cycles of the faces, counterclockwise seen from outside."""
    hull = ConvexHull(V)
    groups: dict = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq, 8))
        groups.setdefault(key, set()).update(simplex.tolist())
    faces = []
    for key, idx in groups.items():
        n = np.asarray(key[:3])
        idx = sorted(idx)
        c = V[idx].mean(axis=0)
        e1 = V[idx[0]] - c
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        ang = [math.atan2((V[i] - c) @ e2, (V[i] - c) @ e1) for i in idx]
        faces.append([i for _, i in sorted(zip(ang, idx))])
    faces.sort(key=lambda f: tuple(np.round(V[f].mean(axis=0), 9)))
    return faces



@dataclass(frozen=True)
class PlatonicBody(Shape):
    kind: ClassVar[str] = "platonic"
    body_kind: str
    circumradius: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3 or not self.circumradius > 0:
            raise ShapeError("Platonic body needs a center in R^3 and positive circumradius")
        V = _canonical_vertices(self.body_kind) * self.circumradius + np.asarray(self.center)
        object.__setattr__(self, "_V", V)
        object.__setattr__(self, "_F", _faces(V))
        r = np.linalg.norm(V - np.asarray(self.center), axis=1)
        if not np.allclose(r, self.circumradius, rtol=1e-12):
            raise ShapeError("vertices are not equidistant from the center")

    @classmethod
    def with_edge(cls, body_kind: str, edge: float, center=(0.0, 0.0, 0.0)):
        V = _canonical_vertices(body_kind)
        F = _faces(V)
        unit_edge = np.linalg.norm(V[F[0][0]] - V[F[0][1]])
        return cls(body_kind, edge / unit_edge, center)

    @property
    def vertices(self) -> np.ndarray:
        return self._V

    @property
    def faces(self) -> list[list[int]]:
        return self._F

    def face_center(self, F) -> tuple:
        return tuple(self._V[F].mean(axis=0))

    def face_normal(self, F) -> np.ndarray:
        c = self._V[F].mean(axis=0) - np.asarray(self.center)
        return c / np.linalg.norm(c)

    @property
    def inradius(self) -> float:
        return float(np.linalg.norm(np.asarray(self.face_center(self._F[0])) - self.center))

    @property
    def edge(self) -> float:
        F = self._F[0]
        return float(np.linalg.norm(self._V[F[0]] - self._V[F[1]]))

    def edges(self) -> list[tuple[int, int]]:
        E = set()
        for F in self._F:
            for k in range(len(F)):
                E.add(tuple(sorted((F[k], F[(k + 1) % len(F)]))))
        return sorted(E)

    def apexes(self) -> list[tuple]:
        """Apex used for each face's cone: its center for the plain body."""
        return [self.face_center(F) for F in self._F]

    def simplices(self) -> list[tuple[Simplex, int, int, int]]:
        """Tetrahedra ``O O_F A_k A_k+1`` with (face, k, k+1) indices."""
        O = self.center
        out = []
        for fi, (F, X) in enumerate(zip(self._F, self.apexes())):
            for k in range(len(F)):
                a, b = F[k], F[(k + 1) % len(F)]
                out.append((Simplex((O, X, tuple(self._V[a]), tuple(self._V[b]))), fi, a, b))
        return out

    @property
    def body(self):
        return Region(tuple(s for s, *_ in self.simplices()))

    @property
    def boundary(self):
        return Region(tuple(Simplex(s.vertices[1:]) for s, *_ in self.simplices()))

    def family(self, name: str) -> Region:
        """Segment families: S (O to vertices), O (O to face apexes), E (edges), D (apexes to face vertices)."""
        O, V = self.center, self._V
        if name == "S":
            return Region(tuple(segment(O, p) for p in V))
        if name == "O":
            return Region(tuple(segment(O, X) for X in self.apexes()))
        if name == "E":
            return Region(tuple(segment(V[a], V[b]) for a, b in self.edges()))
        if name == "D":
            return Region(tuple(segment(X, V[i]) for F, X in zip(self._F, self.apexes()) for i in F))
        raise ShapeError(f"unknown segment family {name!r}")

    def to_dict(self):
        return {"kind": self.kind, "body": self.body_kind, "circumradius": self.circumradius,
                "center": list(self.center)}

    def cell_complex(self, name):
        if name == "pyramids":
            O, V = self.center, self._V
            facets = [[V[F[0]], V[F[k]], V[F[k + 1]]]
                      for F in self._F for k in range(1, len(F) - 1)]
            cells = [np.vstack([O, V[F]]) for F in self._F]
            return CellComplex.conical(O, facets, cells)
        return super().cell_complex(name)


@dataclass(frozen=True)
class StarPolytope(PlatonicBody):
    """Platonic body with a regular pyramid built (+1) or excavated (-1) on each face."""

    kind: ClassVar[str] = "star_polytope"
    height: float = 0.1
    signs: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        signs = tuple(int(s) for s in self.signs) if self.signs else (1,) * len(self._F)
        object.__setattr__(self, "signs", signs)
        if len(signs) != len(self._F) or any(s not in (-1, 1) for s in signs):
            raise ShapeError(f"need one sign (+1 build, -1 excavate) per face ({len(self._F)})")
        if not self.height > 0:
            raise ShapeError("pyramid height must be positive")
        if -1 in signs and self.height >= self.inradius:
            raise ShapeError("excavated pyramid reaches the center; body is not star-shaped about it")

    def apexes(self):
        out = []
        for F, s in zip(self._F, self.signs):
            c = np.asarray(self.face_center(F))
            out.append(tuple(c + s * self.height * self.face_normal(F)))
        return out

    def to_dict(self):
        d = super().to_dict()
        d.update(height=self.height, signs=list(self.signs))
        return d

    def cell_complex(self, name):
        if name == "tetrahedra":
            return CellComplex.simplicial([s for s, *_ in self.simplices()])
        return super().cell_complex(name)


# ---------------------------------------------------------------------------
# dipyramids and dicones


@dataclass(frozen=True)
class Dipyramid(Shape):
    """Body between umbrellas over a regular n-gon with apexes at heights h0, h1."""

    kind: ClassVar[str] = "dipyramid"
    n: int
    radius: float
    h0: float
    h1: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3:
            raise ShapeError("dipyramid needs a center in R^3")
        if self.n < 3 or not self.radius > 0:
            raise ShapeError("dipyramid needs n >= 3 and positive radius")
        if not (math.isfinite(self.h0) and math.isfinite(self.h1)) or self.h0 == self.h1:
            raise ShapeError("dipyramid apexes must be distinct (h0 != h1)")

    @property
    def axis(self):
        return self.center, E3

    def apex(self, h: float) -> tuple:
        c = self.center
        return (c[0], c[1], c[2] + h)

    O0 = property(lambda self: self.apex(self.h0))
    O1 = property(lambda self: self.apex(self.h1))

    @property
    def base(self) -> list[tuple]:
        c = self.center
        return [(c[0] + self.radius * math.cos(2 * math.pi * k / self.n),
                 c[1] + self.radius * math.sin(2 * math.pi * k / self.n), c[2])
                for k in range(self.n)]

    @property
    def apothem(self) -> float:
        return self.radius * math.cos(math.pi / self.n)

    def sin_eta(self, h: float) -> float:
        """Sine of the angle between the axis and a side plane of the umbrella at height h."""
        a = self.apothem
        return a / math.hypot(a, h)

    def umbrella(self, h: float) -> Region:
        X, A, n = self.apex(h), self.base, self.n
        return Region(tuple(triangle(X, A[k], A[(k + 1) % n]) for k in range(n)))

    def scaffold(self, h: float) -> Region:
        X = self.apex(h)
        return Region(tuple(segment(X, a) for a in self.base))

    def simplices_between(self, ha: float, hb: float) -> tuple[Simplex, ...]:
        Xa, Xb, A, n = self.apex(ha), self.apex(hb), self.base, self.n
        return tuple(Simplex((Xa, Xb, A[k], A[(k + 1) % n])) for k in range(n))

    def between(self, ha: float, hb: float) -> Region:
        return Region(self.simplices_between(ha, hb))

    @property
    def body(self):
        return self.between(self.h0, self.h1)

    @property
    def base_boundary(self) -> Region:
        return boundary_segments(self.base)

    def volume(self) -> float:
        return 0.5 * self.n * self.radius ** 2 * math.sin(2 * math.pi / self.n) * abs(self.h1 - self.h0) / 3

    def cell_complex(self, name):
        if name == "simplices":
            return CellComplex.simplicial(self.simplices_between(self.h0, self.h1))
        return super().cell_complex(name)


def dipyramid_split(d, s: float):
    """Split by the umbrella at ``O_s = (1 - s) O_0 + s O_1`` into the parts at O_0 and O_1."""
    if not 0 < s < 1:
        raise ShapeError(f"split parameter must lie in (0, 1), got {s}")
    hs = (1 - s) * d.h0 + s * d.h1
    cls = type(d)
    kw = {f.name: getattr(d, f.name) for f in fields(d) if f.init}
    return cls(**{**kw, "h1": hs}), cls(**{**kw, "h0": hs})


@dataclass(frozen=True)
class Dicone(Shape):
    """Body between two coaxial cones over a circle of radius R."""

    kind: ClassVar[str] = "dicone"
    radius: float
    h0: float
    h1: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3 or not self.radius > 0:
            raise ShapeError("dicone needs a center in R^3 and positive radius")
        if not (math.isfinite(self.h0) and math.isfinite(self.h1)) or self.h0 == self.h1:
            raise ShapeError("dicone apexes must be distinct (h0 != h1)")

    axis = Dipyramid.axis
    apex = Dipyramid.apex
    O0 = Dipyramid.O0
    O1 = Dipyramid.O1

    def sin_eta(self, h: float) -> float:
        return self.radius / math.hypot(self.radius, h)

    def umbrella(self, h: float) -> Region:
        if h == 0:
            return Region.of(AnnulusSector(self.center, 0.0, self.radius,
                                           u=(1.0, 0.0, 0.0), v=(0.0, 1.0, 0.0)))
        return Region.of(ConePatch(self.center, self.radius, h))

    def between(self, ha: float, hb: float) -> Region:
        return Region.of(ConeSolid(self.center, self.radius, ha, hb))

    @property
    def body(self):
        return self.between(self.h0, self.h1)

    @property
    def base_boundary(self) -> Region:
        return Region.of(Circle(self.center, self.radius, (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)))

    def volume(self) -> float:
        return math.pi * self.radius ** 2 * abs(self.h1 - self.h0) / 3


def dicone_limit_mesh(d: Dicone, n: int) -> Dipyramid:
    """Inscribed regular n-gon dipyramid with the same apexes."""
    if n < 5:
        raise ShapeError(f"limit mesh needs n >= 5, got {n}")
    return Dipyramid(n, d.radius, d.h0, d.h1, d.center)


# ---------------------------------------------------------------------------
# cube with a diagonal split


@dataclass(frozen=True)
class CubeSplit(Shape):
    """Axis-aligned cube; vertices indexed by coordinate bits, O2 opposite O1."""

    kind: ClassVar[str] = "cube"
    edge: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)
    o1: int = 0

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3 or not self.edge > 0:
            raise ShapeError("cube needs a center in R^3 and positive edge")
        if self.o1 not in range(8):
            raise ShapeError("o1 must be a vertex index 0..7")
        vols = [s.measure() for s in self.split]
        if not all(_close(v, self.edge ** 3 / 6, 1e-12) for v in vols):
            raise ShapeError("split simplices do not have equal volumes")
        V = self.ring
        for k in range(6):
            if not _close(math.dist(self.O1, V[k]), math.dist(self.O2, V[(k + 1) % 6]), 1e-12):
                raise ShapeError("|O1 V_k| != |O2 V_k+1|")

    def vertex(self, i: int) -> tuple:
        h = self.edge / 2
        return tuple(c + (h if (i >> b) & 1 else -h) for b, c in enumerate(self.center))

    O1 = property(lambda self: self.vertex(self.o1))
    O2 = property(lambda self: self.vertex(self.o1 ^ 7))

    @property
    def ring_indices(self) -> list[int]:
        return [self.o1 ^ m for m in (1, 3, 2, 6, 4, 5)]

    @property
    def ring(self) -> list[tuple]:
        return [self.vertex(i) for i in self.ring_indices]

    @property
    def split(self) -> tuple[Simplex, ...]:
        V = self.ring
        return tuple(Simplex((self.O1, self.O2, V[k], V[(k + 1) % 6])) for k in range(6))

    @property
    def body(self):
        return Region(self.split)

    def faces(self) -> list[list[int]]:
        """Vertex index cycles of the six faces."""
        out = []
        for b in range(3):
            o1, o2 = 1 << ((b + 1) % 3), 1 << ((b + 2) % 3)
            for side in (0, 1 << b):
                out.append([side, side | o1, side | o1 | o2, side | o2])
        return out

    def face_pyramid_simplices(self) -> list[tuple[Simplex, list[int]]]:
        O = self.center
        out = []
        for F in self.faces():
            P = [self.vertex(i) for i in F]
            out.append((Simplex((O, P[0], P[1], P[2])), F))
            out.append((Simplex((O, P[0], P[2], P[3])), F))
        return out

    def family(self, name: str) -> Region:
        """P: face diagonals at O1, O2; S: edges at O1, O2; Q: main diagonals of the other six; L: the ring."""
        ends = (self.o1, self.o1 ^ 7)
        if name == "P":
            return Region(tuple(segment(self.vertex(e), self.vertex(e ^ m)) for e in ends for m in (3, 5, 6)))
        if name == "S":
            return Region(tuple(segment(self.vertex(e), self.vertex(e ^ m)) for e in ends for m in (1, 2, 4)))
        if name == "Q":
            rest = [i for i in range(8) if i not in ends and i < i ^ 7]
            return Region(tuple(segment(self.vertex(i), self.vertex(i ^ 7)) for i in rest))
        if name == "L":
            return boundary_segments(self.ring)
        raise ShapeError(f"unknown cube segment set {name!r}")

    def cell_complex(self, name):
        if name == "split":
            return CellComplex.simplicial(self.split)
        if name == "pyramids":
            O = self.center
            facets, cells = [], []
            for F in self.faces():
                P = [self.vertex(i) for i in F]
                facets += [[P[0], P[1], P[2]], [P[0], P[2], P[3]]]
                cells.append(np.vstack([O, P]))
            return CellComplex.conical(O, facets, cells)
        return super().cell_complex(name)


# ---------------------------------------------------------------------------
# JSON shape specs and coercion

def _need(d, required, optional=()):
    unknown = set(d) - set(required) - set(optional) - {"kind"}
    if unknown:
        raise ShapeError(f"unexpected fields {sorted(unknown)} for shape {d.get('kind')!r}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ShapeError(f"missing fields {missing} for shape {d.get('kind')!r}")


def _tuple_pts(v):
    return tuple(tuple(float(x) for x in p) for p in v)


def shape_from_dict(d: dict) -> Shape:
    """Build a shape from its JSON spec ``{"kind": ..., parameters...}``."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ShapeError("shape spec must be an object with a 'kind'")
    k = d["kind"]
    try:
        if k == "simplex":
            _need(d, ["vertices"])
            return SimplexShape(_tuple_pts(d["vertices"]))
        if k == "segment":
            _need(d, ["a", "b"])
            return SimplexShape(_tuple_pts([d["a"], d["b"]]))
        if k == "disk":
            _need(d, ["radius"], ["center"])
            return DiskShape(float(d["radius"]), tuple(d.get("center", (0.0, 0.0))))
        if k == "ball":
            _need(d, ["radius"], ["center"])
            return BallShape(float(d["radius"]), tuple(d.get("center", (0.0, 0.0, 0.0))))
        if k == "quadrilateral":
            _need(d, ["vertices"])
            return QuadrilateralEH(_tuple_pts(d["vertices"]))
        if k == "parallelogram":
            _need(d, ["vertices"])
            return Parallelogram(_tuple_pts(d["vertices"]))
        if k == "regular_polygon":
            _need(d, ["n"], ["radius", "center", "phase"])
            return NicePolygon.regular(int(d["n"]), float(d.get("radius", 1.0)),
                                       tuple(d.get("center", (0.0, 0.0))), float(d.get("phase", 0.0)))
        if k == "nice_polygon":
            _need(d, ["vertices", "center"])
            return NicePolygon(_tuple_pts(d["vertices"]), tuple(d["center"]))
        if k == "fan":
            _need(d, ["center", "vertices"])
            return Fan(tuple(d["center"]), _tuple_pts(d["vertices"]))
        if k == "annulus":
            _need(d, ["r", "R"], ["center"])
            return Annulus(float(d["r"]), float(d["R"]), tuple(d.get("center", (0.0, 0.0))))
        if k in ("platonic", "star_polytope"):
            extra = ["height", "signs"] if k == "star_polytope" else []
            _need(d, ["body"], ["circumradius", "edge", "center"] + extra)
            if "circumradius" in d and "edge" in d:
                raise ShapeError("give either circumradius or edge, not both")
            center = tuple(d.get("center", (0.0, 0.0, 0.0)))
            if "edge" in d:
                base = PlatonicBody.with_edge(d["body"], float(d["edge"]), center)
                R = base.circumradius
            else:
                R = float(d.get("circumradius", 1.0))
            if k == "platonic":
                return PlatonicBody(d["body"], R, center)
            return StarPolytope(d["body"], R, center, float(d.get("height", 0.1)),
                                tuple(d.get("signs", ())))
        if k == "dipyramid":
            _need(d, ["n", "radius", "h0", "h1"], ["center"])
            return Dipyramid(int(d["n"]), float(d["radius"]), float(d["h0"]), float(d["h1"]),
                             tuple(d.get("center", (0.0, 0.0, 0.0))))
        if k == "dicone":
            _need(d, ["radius", "h0", "h1"], ["center"])
            return Dicone(float(d["radius"]), float(d["h0"]), float(d["h1"]),
                          tuple(d.get("center", (0.0, 0.0, 0.0))))
        if k == "cube":
            _need(d, [], ["edge", "center", "o1"])
            return CubeSplit(float(d.get("edge", 1.0)), tuple(d.get("center", (0.0, 0.0, 0.0))),
                             int(d.get("o1", 0)))
    except (TypeError, KeyError, GeometryError) as exc:
        raise ShapeError(f"malformed {k} spec: {exc}") from None
    raise ShapeError(f"unknown shape kind {k!r}")


def coerce(shape: Shape, target: type) -> Optional[Shape]:
    """View ``shape`` as an instance of ``target`` when the geometry allows it."""
    if isinstance(shape, target):
        return shape
    try:
        if target is NicePolygon:
            if isinstance(shape, QuadrilateralEH):
                A, B, C, D = shape.vertices
                V = (A, B, C, D) if _cross2(A, B, C) > 0 else (D, C, B, A)
                return NicePolygon(V, shape.O)
            if isinstance(shape, SimplexShape) and len(shape.vertices) == 3:
                V = shape.vertices
                if _cross2(*V) < 0:
                    V = V[::-1]
                return NicePolygon(V, tuple(np.mean(V, axis=0)))
        if target is CubeSplit and isinstance(shape, PlatonicBody) and type(shape) is PlatonicBody \
                and shape.body_kind == "cube":
            return CubeSplit(shape.edge, shape.center)
        if target is PlatonicBody and isinstance(shape, CubeSplit):
            return PlatonicBody.with_edge("cube", shape.edge, shape.center)
    except ShapeError:
        return None
    return None


__all__ = [
    "ShapeError", "Shape", "CellComplex", "SimplexShape", "DiskShape", "BallShape",
    "QuadrilateralEH", "Parallelogram", "NicePolygon", "Fan", "Annulus", "AnnulusMesh",
    "PlatonicBody", "StarPolytope", "Dipyramid", "Dicone", "CubeSplit", "dipyramid_split",
    "dicone_limit_mesh", "shape_from_dict", "coerce",
]
