"""Points, simplices, homotheties and measurable regions.

Every average the library computes is taken over a :class:`Region`: an
immutable union of pieces sharing one intrinsic dimension.  Pieces are
either simplices of any dimension (a 0-simplex is a point mass carrying
counting measure) or one of a handful of parametrized curved pieces
(circles, annulus sectors, cone surfaces, cone solids, balls, spheres).
All measures are closed-form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

GRAM_RTOL = 1e-10
FRAME_TOL = 1e-9
TWO_PI = 2.0 * math.pi

Point = tuple[float, ...]


class GeometryError(ValueError):
    """Raised when a geometric object violates its invariants."""


def as_point(p: Iterable[float]) -> Point:
    pt = tuple(float(c) for c in p)
    if not pt:
        raise GeometryError("point must have at least one coordinate")
    if not all(math.isfinite(c) for c in pt):
        raise GeometryError(f"non-finite coordinate in {pt}")
    return pt


def _cross(u: Point, v: Point) -> Point:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _check_frame(u: Point, v: Point, d: int) -> None:
    if len(u) != d or len(v) != d:
        raise GeometryError("frame vectors must match the ambient dimension")
    uu, vv, uv = np.dot(u, u), np.dot(v, v), np.dot(u, v)
    if abs(uu - 1) > FRAME_TOL or abs(vv - 1) > FRAME_TOL or abs(uv) > FRAME_TOL:
        raise GeometryError("frame vectors u, v must be orthonormal")


def default_frame(d: int) -> tuple[Point, Point]:
    u = (1.0,) + (0.0,) * (d - 1)
    v = (0.0, 1.0) + (0.0,) * (d - 2)
    return u, v


def _scaled_frame(u: Point, v: Point, lam: float) -> tuple[Point, Point]:
    if lam > 0:
        return u, v
    return tuple(-c for c in u), tuple(-c for c in v)


# ---------------------------------------------------------------------------
# Simplices


def simplex_volume(P: np.ndarray) -> float:
    """k-volume of the simplex with vertex rows ``P``; one point has measure 1."""
    k = P.shape[0] - 1
    if k == 0:
        return 1.0
    E = P[1:] - P[0]
    if E.shape[0] == E.shape[1]:
        return abs(float(np.linalg.det(E))) / math.factorial(k)
    R = np.linalg.qr(E.T, mode="r")
    return abs(float(np.prod(np.diag(R)))) / math.factorial(k)


@dataclass(frozen=True)
class Simplex:
    """Convex hull of ``k + 1`` affinely independent points in R^d.

    ``k = 0`` is a point mass.  Construction validates affine
    independence with a relative Gram-determinant threshold.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(as_point(p) for p in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise GeometryError("simplex needs at least one vertex")
        d = len(verts[0])
        if any(len(p) != d for p in verts):
            raise GeometryError("simplex vertices have mixed dimensions")
        k = len(verts) - 1
        if k > d:
            raise GeometryError(f"{k + 1} vertices cannot be affinely independent in R^{d}")
        if k > 0:
            E = np.asarray(verts[1:]) - np.asarray(verts[0])
            G = E @ E.T
            scale = float(np.prod(np.diag(G)))
            if scale == 0.0 or np.linalg.det(G) <= GRAM_RTOL * scale:
                raise GeometryError("simplex vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient(self) -> int:
        return len(self.vertices[0])

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    def measure(self) -> float:
        """k-dimensional volume; a point mass has counting measure 1."""
        return simplex_volume(self.array)

    def mapped(self, h: "Homothety") -> "Simplex":
        return Simplex(tuple(h(p) for p in self.vertices))


def point_mass(p: Iterable[float]) -> Simplex:
    return Simplex((as_point(p),))


def segment(a, b) -> Simplex:
    return Simplex((as_point(a), as_point(b)))


def triangle(a, b, c) -> Simplex:
    return Simplex((as_point(a), as_point(b), as_point(c)))


def tetra(a, b, c, d) -> Simplex:
    return Simplex((as_point(a), as_point(b), as_point(c), as_point(d)))


def barycenter(s: Simplex) -> Point:
    return tuple(float(c) for c in s.array.mean(axis=0))


def sub_simplex(s: Simplex, K: Iterable[int]) -> Simplex:
    """The face spanned by the vertices indexed by ``K``."""
    idx = sorted(set(K))
    if not idx:
        raise GeometryError("index set K must be nonempty")
    if idx[0] < 0 or idx[-1] > s.dim:
        raise GeometryError(f"index set {idx} out of range for a {s.dim}-simplex")
    return Simplex(tuple(s.vertices[i] for i in idx))


def subset_simplex(s: Simplex, K: Iterable[int]) -> Simplex:
    """The homothetic sub-simplex through the barycenter indexed by ``K``.

    For ``j`` outside ``K`` its vertices are
    ``(sum_{i in K} x_i + (n + 1 - |K|) x_j) / (n + 1)``; all of them share
    the barycenter of ``s``.
    """
    n = s.dim
    K = set(K)
    if any(i < 0 or i > n for i in K):
        raise GeometryError(f"index set {sorted(K)} out of range for a {n}-simplex")
    if len(K) == n + 1:
        raise GeometryError("K must be a proper subset of the vertex indices")
    X = s.array
    base = X[sorted(K)].sum(axis=0) if K else np.zeros(s.ambient)
    c = (n + 1 - len(K)) / (n + 1)
    verts = [base / (n + 1) + c * X[j] for j in range(n + 1) if j not in K]
    if len(verts) == 1:
        # the barycenter; computed as a plain mean to avoid drift
        return point_mass(barycenter(s))
    return Simplex(tuple(as_point(v) for v in verts))


# ---------------------------------------------------------------------------
# Homothety


@dataclass(frozen=True)
class Homothety:
    center: Point
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        lam = float(self.scale)
        if not math.isfinite(lam) or lam == 0.0:
            raise GeometryError("homothety scale must be finite and nonzero")
        object.__setattr__(self, "scale", lam)

    def __call__(self, p: Iterable[float]) -> Point:
        a, lam = self.center, self.scale
        return tuple(ai + lam * (pi - ai) for ai, pi in zip(a, as_point(p)))

    def inverse(self) -> "Homothety":
        return Homothety(self.center, 1.0 / self.scale)


# ---------------------------------------------------------------------------
# Curved pieces


@dataclass(frozen=True)
class Circle:
    """Full circle of ``radius`` in the plane spanned by ``u, v``."""

    center: Point
    radius: float
    u: Point = None
    v: Point = None

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        if len(c) < 2:
            raise GeometryError("circle needs ambient dimension >= 2")
        if self.u is None or self.v is None:
            u, v = default_frame(len(c))
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        else:
            object.__setattr__(self, "u", as_point(self.u))
            object.__setattr__(self, "v", as_point(self.v))
        _check_frame(self.u, self.v, len(c))
        if not self.radius > 0:
            raise GeometryError("circle radius must be positive")

    dim = property(lambda self: 1)
    ambient = property(lambda self: len(self.center))

    def measure(self) -> float:
        return TWO_PI * self.radius

    def mapped(self, h: Homothety) -> "Circle":
        u, v = _scaled_frame(self.u, self.v, h.scale)
        return Circle(h(self.center), abs(h.scale) * self.radius, u, v)


@dataclass(frozen=True)
class AnnulusSector:
    """Planar sector ``r_in <= rho <= r_out``, ``theta0 <= theta <= theta1``.

    ``r_in = 0`` with a full turn is a disk.
    """

    center: Point
    r_in: float
    r_out: float
    theta0: float = 0.0
    theta1: float = TWO_PI
    u: Point = None
    v: Point = None

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        if self.u is None or self.v is None:
            u, v = default_frame(len(c))
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        else:
            object.__setattr__(self, "u", as_point(self.u))
            object.__setattr__(self, "v", as_point(self.v))
        _check_frame(self.u, self.v, len(c))
        if not (0.0 <= self.r_in < self.r_out):
            raise GeometryError(f"need 0 <= r_in < r_out, got {self.r_in}, {self.r_out}")
        span = self.theta1 - self.theta0
        if not (0.0 < span <= TWO_PI + 1e-12):
            raise GeometryError("sector angle range must lie in (0, 2*pi]")

    dim = property(lambda self: 2)
    ambient = property(lambda self: len(self.center))

    def measure(self) -> float:
        return 0.5 * (self.theta1 - self.theta0) * (self.r_out**2 - self.r_in**2)

    def mapped(self, h: Homothety) -> "AnnulusSector":
        u, v = _scaled_frame(self.u, self.v, h.scale)
        lam = abs(h.scale)
        return AnnulusSector(h(self.center), lam * self.r_in, lam * self.r_out,
                             self.theta0, self.theta1, u, v)


def disk(center, radius: float) -> AnnulusSector:
    return AnnulusSector(center, 0.0, radius)


def _normal(u: Point, v: Point) -> Point:
    return _cross(u, v)


@dataclass(frozen=True)
class ConePatch:
    """Lateral surface of a right circular cone over an arc of its base.

    The base circle has ``center``/``radius`` in the plane of ``u, v``; the
    apex sits at ``center + height * (u x v)``.
    """

    center: Point
    radius: float
    height: float
    theta0: float = 0.0
    theta1: float = TWO_PI
    u: Point = (1.0, 0.0, 0.0)
    v: Point = (0.0, 1.0, 0.0)

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "u", as_point(self.u))
        object.__setattr__(self, "v", as_point(self.v))
        if len(c) != 3:
            raise GeometryError("cone patches live in R^3")
        _check_frame(self.u, self.v, 3)
        if not self.radius > 0:
            raise GeometryError("cone base radius must be positive")
        if not math.isfinite(self.height):
            raise GeometryError("cone height must be finite")
        span = self.theta1 - self.theta0
        if not (0.0 < span <= TWO_PI + 1e-12):
            raise GeometryError("cone angle range must lie in (0, 2*pi]")

    dim = property(lambda self: 2)
    ambient = property(lambda self: 3)

    @property
    def apex(self) -> Point:
        n = _normal(self.u, self.v)
        return tuple(c + self.height * ni for c, ni in zip(self.center, n))

    @property
    def slant(self) -> float:
        return math.hypot(self.radius, self.height)

    def measure(self) -> float:
        return 0.5 * (self.theta1 - self.theta0) * self.radius * self.slant

    def mapped(self, h: Homothety) -> "ConePatch":
        u, v = _scaled_frame(self.u, self.v, h.scale)
        return ConePatch(h(self.center), abs(h.scale) * self.radius, h.scale * self.height,
                         self.theta0, self.theta1, u, v)


@dataclass(frozen=True)
class ConeSolid:
    """Solid between two coaxial cones sharing one base circle.

    The apexes sit at signed heights ``h0`` and ``h1`` along ``u x v``;
    ``h1 = 0`` gives an ordinary solid cone, opposite signs a convex dicone.
    """

    center: Point
    radius: float
    h0: float
    h1: float
    u: Point = (1.0, 0.0, 0.0)
    v: Point = (0.0, 1.0, 0.0)

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "u", as_point(self.u))
        object.__setattr__(self, "v", as_point(self.v))
        if len(c) != 3:
            raise GeometryError("cone solids live in R^3")
        _check_frame(self.u, self.v, 3)
        if not self.radius > 0:
            raise GeometryError("cone base radius must be positive")
        if not (math.isfinite(self.h0) and math.isfinite(self.h1)) or self.h0 == self.h1:
            raise GeometryError("cone solid needs two distinct finite apex heights")

    dim = property(lambda self: 3)
    ambient = property(lambda self: 3)

    def measure(self) -> float:
        return math.pi * self.radius**2 * abs(self.h1 - self.h0) / 3.0

    def mapped(self, h: Homothety) -> "ConeSolid":
        u, v = _scaled_frame(self.u, self.v, h.scale)
        return ConeSolid(h(self.center), abs(h.scale) * self.radius,
                         h.scale * self.h0, h.scale * self.h1, u, v)


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3:
            raise GeometryError("balls live in R^3")
        if not self.radius > 0:
            raise GeometryError("ball radius must be positive")

    dim = property(lambda self: 3)
    ambient = property(lambda self: 3)

    def measure(self) -> float:
        return 4.0 / 3.0 * math.pi * self.radius**3

    def mapped(self, h: Homothety) -> "Ball":
        return Ball(h(self.center), abs(h.scale) * self.radius)


@dataclass(frozen=True)
class Sphere:
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if len(self.center) != 3:
            raise GeometryError("spheres live in R^3")
        if not self.radius > 0:
            raise GeometryError("sphere radius must be positive")

    dim = property(lambda self: 2)
    ambient = property(lambda self: 3)

    def measure(self) -> float:
        return 4.0 * math.pi * self.radius**2

    def mapped(self, h: Homothety) -> "Sphere":
        return Sphere(h(self.center), abs(h.scale) * self.radius)


Piece = Union[Simplex, Circle, AnnulusSector, ConePatch, ConeSolid, Ball, Sphere]
CURVED_PIECES = (Circle, AnnulusSector, ConePatch, ConeSolid, Ball, Sphere)


# ---------------------------------------------------------------------------
# Regions


@dataclass(frozen=True)
class Region:
    """Immutable union of pieces of one intrinsic dimension.

    Pieces are assumed to overlap at most in measure-zero sets; the measure
    of the region is the sum of the piece measures.
    """

    pieces: tuple[Piece, ...]
    dim: int = field(init=False)
    ambient: int = field(init=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise GeometryError("region needs at least one piece")
        for p in pieces:
            if not isinstance(p, (Simplex,) + CURVED_PIECES):
                raise GeometryError(f"unsupported piece type {type(p).__name__}")
        dims = {p.dim for p in pieces}
        if len(dims) != 1:
            raise GeometryError(f"region mixes intrinsic dimensions {sorted(dims)}")
        ambients = {p.ambient for p in pieces}
        if len(ambients) != 1:
            raise GeometryError(f"region mixes ambient dimensions {sorted(ambients)}")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "dim", dims.pop())
        object.__setattr__(self, "ambient", ambients.pop())
        if self.dim > 0 and any(not p.measure() > 0 for p in pieces):
            raise GeometryError("every piece of a positive-dimensional region needs positive measure")

    @classmethod
    def of(cls, *pieces: Piece) -> "Region":
        return cls(tuple(pieces))

    def __len__(self) -> int:
        return len(self.pieces)

    def __or__(self, other: "Region") -> "Region":
        return Region(self.pieces + other.pieces)


def as_region(obj) -> Region:
    if isinstance(obj, Region):
        return obj
    if isinstance(obj, (Simplex,) + CURVED_PIECES):
        return Region((obj,))
    return Region(tuple(obj))


def union(regions: Sequence[Region]) -> Region:
    pieces: list = []
    for r in regions:
        pieces.extend(as_region(r).pieces)
    return Region(tuple(pieces))


def points(pts: Iterable[Iterable[float]]) -> Region:
    """Region of point masses; its average is the arithmetic mean."""
    return Region(tuple(point_mass(p) for p in pts))


def measure(r) -> float:
    """Total length / area / volume of a region (counting measure if m = 0)."""
    r = as_region(r)
    return math.fsum(p.measure() for p in r.pieces)


def apply_homothety(h: Homothety, r) -> Region:
    r = as_region(r)
    if len(h.center) != r.ambient:
        raise GeometryError("homothety center and region have different dimensions")
    return Region(tuple(p.mapped(h) for p in r.pieces))


def simplex_region(simplices: Iterable[Simplex]) -> Region:
    return Region(tuple(simplices))


def boundary_segments(vertices: Sequence[Point], closed: bool = True) -> Region:
    """Region of the edges of a polygonal chain."""
    n = len(vertices)
    stop = n if closed else n - 1
    return Region(tuple(segment(vertices[i], vertices[(i + 1) % n]) for i in range(stop)))


def barycentric_coordinates(s: Simplex, p: Iterable[float]) -> np.ndarray:
    """Barycentric coordinates of ``p`` relative to ``s`` (least squares if k < d)."""
    X = s.array
    E = (X[1:] - X[0]).T
    rhs = np.asarray(as_point(p)) - X[0]
    lam, *_ = np.linalg.lstsq(E, rhs, rcond=None)
    return np.concatenate([[1.0 - lam.sum()], lam])


def in_simplex(s: Simplex, p: Iterable[float], tol: float = 1e-12) -> bool:
    lam = barycentric_coordinates(s, p)
    recon = lam @ s.array
    return bool(lam.min() >= -tol and np.allclose(recon, as_point(p), atol=1e-10))


# ---------------------------------------------------------------------------
# JSON form

_PIECE_TYPES = {
    "circle": Circle, "annulus_sector": AnnulusSector, "cone_patch": ConePatch,
    "cone_solid": ConeSolid, "ball": Ball, "sphere": Sphere,
}
_PIECE_NAMES = {cls: name for name, cls in _PIECE_TYPES.items()}


def piece_to_dict(p: Piece) -> dict:
    if isinstance(p, Simplex):
        return {"type": "simplex", "vertices": [list(v) for v in p.vertices]}
    out = {"type": _PIECE_NAMES[type(p)]}
    for name in p.__dataclass_fields__:
        val = getattr(p, name)
        out[name] = list(val) if isinstance(val, tuple) else val
    return out


def piece_from_dict(d: dict) -> Piece:
    d = dict(d)
    kind = d.pop("type", None)
    if kind == "simplex":
        if set(d) != {"vertices"}:
            raise GeometryError(f"unexpected simplex fields {sorted(set(d) - {'vertices'})}")
        return Simplex(tuple(tuple(v) for v in d["vertices"]))
    if kind not in _PIECE_TYPES:
        raise GeometryError(f"unknown piece type {kind!r}")
    cls = _PIECE_TYPES[kind]
    unknown = set(d) - set(cls.__dataclass_fields__)
    if unknown:
        raise GeometryError(f"unexpected {kind} fields {sorted(unknown)}")
    return cls(**d)


def region_to_dict(r) -> dict:
    return {"pieces": [piece_to_dict(p) for p in as_region(r).pieces]}


def region_from_dict(d: dict) -> Region:
    if set(d) != {"pieces"}:
        raise GeometryError("region JSON needs exactly the field 'pieces'")
    return Region(tuple(piece_from_dict(p) for p in d["pieces"]))
