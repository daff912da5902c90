"""Seeded convex and piecewise-convex test functions.

A :class:`ScalarField` is a vectorized evaluator ``(N, d) -> (N,)`` plus the
metadata the verification harness needs: its kind, seed, whether it is
globally convex, and otherwise the convex cells on which it is convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.special import logsumexp

from ._kernels import (
    EXP_AFFINE, MAX_AFFINE, NORM_POWER, QUADRATIC, SIMPLICIAL_PL, STAR_GAUGE, eval_native,
)
from .geometry import AnnulusSector, Ball, Region, Simplex, as_region, measure

CONVEX_KINDS = ("max_affine", "psd_quadratic", "exp_affine", "norm_power")
# smooth stand-ins for kinked kinds, for regions where kinks cannot be cut exactly
SMOOTH_CONVEX_KINDS = ("soft_max_affine", "psd_quadratic", "exp_affine", "norm_power")
RANDOM_KINDS = CONVEX_KINDS + ("soft_max_affine",)
KINDS = CONVEX_KINDS + ("piecewise", "soft_max_affine")
MIDPOINT_TOL = 1e-12
_KIND_SALT = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True, eq=False)
class NativeSpec:
    code: int
    A: np.ndarray
    b: np.ndarray
    c: float
    center: np.ndarray
    p: float


def _native(code, d, A=None, b=None, c=0.0, center=None, p=1.0):
    A = np.zeros((1, d)) if A is None else np.atleast_2d(np.asarray(A, dtype=float))
    b = np.zeros(1) if b is None else np.atleast_1d(np.asarray(b, dtype=float))
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    return NativeSpec(code, np.ascontiguousarray(A), np.ascontiguousarray(b), float(c),
                      np.ascontiguousarray(center), float(p))


@dataclass(frozen=True, eq=False)
class ConvexCell:
    """A bounded convex polytope given by its vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", V)
        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise ValueError(f"cell is not full-dimensional: {exc}") from None
        object.__setattr__(self, "_eq", hull.equations)

    def contains(self, P, tol: float = 1e-9) -> np.ndarray:
        P = np.atleast_2d(P)
        return np.all(P @ self._eq[:, :-1].T + self._eq[:, -1] <= tol, axis=1)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Evaluable real function on R^d with convexity metadata.

    ``cells is None`` with ``convex=True`` means globally convex.  A
    piecewise field lists the convex cells on each of which it is convex.
    """

    kind: str
    dim: int
    fn: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    native: Optional[NativeSpec | tuple] = None
    constant: Optional[float] = None
    convex: bool = True
    cells: Optional[tuple[ConvexCell, ...]] = None
    conical_about: Optional[tuple[float, ...]] = None

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"field on R^{self.dim} evaluated at points of R^{X.shape[1]}")
        return np.asarray(self.fn(X), dtype=float)

    @property
    def globally_convex(self) -> bool:
        return self.convex and self.cells is None

    def convex_on(self, cell_vertices) -> bool:
        """True when the field is declared convex on conv(cell_vertices)."""
        if self.globally_convex:
            return True
        if self.cells is None:
            return False
        V = np.asarray(cell_vertices, dtype=float)
        return any(c.contains(V).all() for c in self.cells)

    def describe(self) -> dict:
        out = {"kind": self.kind, "d": self.dim}
        if self.seed is not None:
            out["seed"] = self.seed
        for k, v in self.params.items():
            out[k] = v.tolist() if isinstance(v, np.ndarray) else v
        return out


# ---------------------------------------------------------------------------
# explicit constructors


def constant(value: float, d: int) -> ScalarField:
    v = float(value)
    return ScalarField("constant", d, lambda X: np.full(X.shape[0], v),
                       params={"value": v}, constant=v)


def affine(gradient, offset: float = 0.0) -> ScalarField:
    g = np.asarray(gradient, dtype=float)
    nat = _native(MAX_AFFINE, len(g), g[None, :], [offset])
    return ScalarField("affine", len(g), lambda X: X @ g + offset,
                       params={"gradient": g, "offset": float(offset)}, native=nat)


def max_affine(slopes, offsets, seed=None) -> ScalarField:
    A = np.atleast_2d(np.asarray(slopes, dtype=float))
    b = np.asarray(offsets, dtype=float)
    if A.shape[0] != b.shape[0]:
        raise ValueError("need one offset per affine piece")
    nat = _native(MAX_AFFINE, A.shape[1], A, b)
    return ScalarField("max_affine", A.shape[1], lambda X: (X @ A.T + b).max(axis=1),
                       params={"slopes": A, "offsets": b}, seed=seed, native=nat)


def soft_max_affine(slopes, offsets, temperature: float, seed=None) -> ScalarField:
    """``t * log(sum_j exp((A[j] . x + b[j]) / t))``: a smooth convex upper envelope of the max."""
    A = np.atleast_2d(np.asarray(slopes, dtype=float))
    b = np.asarray(offsets, dtype=float)
    t = float(temperature)
    if A.shape[0] != b.shape[0]:
        raise ValueError("need one offset per affine piece")
    if not t > 0:
        raise ValueError("temperature must be positive")
    return ScalarField("soft_max_affine", A.shape[1],
                       lambda X: t * logsumexp((X @ A.T + b) / t, axis=1),
                       params={"slopes": A, "offsets": b, "temperature": t}, seed=seed)


def quadratic(matrix, linear=None, const: float = 0.0, seed=None,
              kind: str = "quadratic") -> ScalarField:
    M = np.atleast_2d(np.asarray(matrix, dtype=float))
    M = 0.5 * (M + M.T)
    d = M.shape[0]
    b = np.zeros(d) if linear is None else np.asarray(linear, dtype=float)
    convex = bool(np.linalg.eigvalsh(M).min() >= -1e-12)
    nat = _native(QUADRATIC, d, M, b, const)
    return ScalarField(kind, d,
                       lambda X: np.einsum("ni,ij,nj->n", X, M, X) + X @ b + const,
                       params={"matrix": M, "linear": b, "constant": float(const)},
                       seed=seed, native=nat, convex=convex)


def squared_norm(d: int) -> ScalarField:
    return quadratic(np.eye(d))


def exp_affine(a, b: float = 0.0, scale: float = 1.0, seed=None) -> ScalarField:
    a = np.asarray(a, dtype=float)
    if scale < 0:
        raise ValueError("exp_affine needs a nonnegative scale to stay convex")
    nat = _native(EXP_AFFINE, len(a), a[None, :], [b], scale)
    return ScalarField("exp_affine", len(a), lambda X: scale * np.exp(X @ a + b),
                       params={"a": a, "b": float(b), "scale": float(scale)},
                       seed=seed, native=nat)


def norm_power(center, p: float, scale: float = 1.0, seed=None) -> ScalarField:
    c = np.asarray(center, dtype=float)
    if p < 1 or scale < 0:
        raise ValueError("norm_power is convex only for p >= 1 and scale >= 0")
    nat = _native(NORM_POWER, len(c), center=c, c=scale, p=p)
    return ScalarField("norm_power", len(c),
                       lambda X: scale * np.linalg.norm(X - c, axis=1) ** p,
                       params={"center": c, "p": float(p), "scale": float(scale)},
                       seed=seed, native=nat)


# ---------------------------------------------------------------------------
# piecewise-affine parts


class SimplicialPL:
    """Continuous function, affine on each simplex of a conforming mesh.

    ``values`` has one row of nodal values per simplex.
    """

    def __init__(self, simplices, values):
        S = np.asarray(simplices, dtype=float)
        d = S.shape[-1]
        E = np.transpose(S[:, 1:, :] - S[:, :1, :], (0, 2, 1))
        Tinv = np.linalg.inv(E)
        self.native = _native(SIMPLICIAL_PL, d, Tinv.reshape(-1, d),
                              np.asarray(values, dtype=float).ravel(), 1.0, S[:, 0, :].ravel())

    def __call__(self, X):
        n = self.native
        return eval_native(n.code, n.A, n.b, n.c, n.center, n.p, np.asarray(X, dtype=float))


class StarGauge:
    """Positively homogeneous about ``apex``, linear on each facet cone.

    ``facets`` has shape ``(F, d, d)``: ``d`` points per boundary facet, at
    which the gauge equals one.  ``scale`` multiplies the gauge.
    """

    def __init__(self, apex, facets, scale: float = 1.0):
        apex = np.asarray(apex, dtype=float)
        F = np.asarray(facets, dtype=float) - apex
        d = apex.shape[0]
        M = np.linalg.inv(np.transpose(F, (0, 2, 1)))
        self.native = _native(STAR_GAUGE, d, M.reshape(-1, d), None, scale, apex)

    def __call__(self, X):
        n = self.native
        return eval_native(n.code, n.A, n.b, n.c, n.center, n.p, np.asarray(X, dtype=float))


def piecewise(base: ScalarField, pl: Callable, cells: Sequence, seed=None,
              params=None, conical_about=None) -> ScalarField:
    """``base + pl`` declared convex on each cell (vertex arrays)."""
    cell_objs = tuple(c if isinstance(c, ConvexCell) else ConvexCell(c) for c in cells)
    native = None
    pl_native = getattr(pl, "native", None)
    if base.native is not None and pl_native is not None:
        native = (base.native, pl_native)
    return ScalarField("piecewise", base.dim, lambda X: base.fn(X) + pl(X),
                       params=dict(params or {}), seed=seed, native=native, convex=False,
                       cells=cell_objs, conical_about=conical_about)


def neg_abs(normal, offset: float = 0.0, extent: float = 1e3) -> ScalarField:
    """``-|n . x - offset|``: affine on both sides of a hyperplane.

    Convex on each closed half-space but not globally.  The declared cells
    are large boxes clipped to each side.
    """
    n = np.asarray(normal, dtype=float)
    d = len(n)
    cells = []
    for sign in (1.0, -1.0):
        corners = np.array(np.meshgrid(*[[-extent, extent]] * d)).reshape(d, -1).T
        # project box corners onto the half-space side
        t = corners @ n - offset
        clipped = corners - np.outer(np.where(sign * t < 0, t, 0.0), n) / (n @ n)
        cells.append(np.unique(clipped.round(12), axis=0))
    return ScalarField("neg_abs", d, lambda X: -np.abs(X @ n - offset),
                       params={"normal": n, "offset": float(offset)}, convex=False,
                       cells=tuple(ConvexCell(c) for c in cells))


# ---------------------------------------------------------------------------
# seeded generators


def _rng(kind: str, d: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), _KIND_SALT.get(kind, 99), int(d)])


def random_convex(kind: str, d: int, seed: int) -> ScalarField:
    """Deterministic random convex field of the given kind on R^d."""
    if d not in (1, 2, 3, 4):
        raise ValueError(f"unsupported dimension {d}")
    rng = _rng(kind, d, seed)
    if kind == "max_affine":
        m = int(rng.integers(3, 9))
        return max_affine(rng.uniform(-2, 2, (m, d)), rng.uniform(-2, 2, m), seed=seed)
    if kind == "soft_max_affine":
        m = int(rng.integers(3, 9))
        return soft_max_affine(rng.uniform(-2, 2, (m, d)), rng.uniform(-2, 2, m),
                               float(rng.uniform(0.2, 0.5)), seed=seed)
    if kind == "psd_quadratic":
        A = rng.uniform(-1, 1, (d, d))
        return quadratic(A.T @ A, rng.uniform(-1, 1, d), float(rng.uniform(-1, 1)),
                         seed=seed, kind="psd_quadratic")
    if kind == "exp_affine":
        a = rng.uniform(-1, 1, d)
        a *= 2.5 / max(np.abs(a).sum(), 2.5)
        return exp_affine(a, float(rng.uniform(-1, 1)), seed=seed)
    if kind == "norm_power":
        return norm_power(rng.uniform(-0.5, 0.5, d), float(rng.uniform(1, 3)),
                          float(rng.uniform(0.5, 1.5)), seed=seed)
    raise ValueError(f"unsupported kind {kind!r}")


def random_affine(d: int, seed: int) -> ScalarField:
    rng = np.random.default_rng([int(seed), 1000, d])
    return affine(rng.uniform(-2, 2, d), float(rng.uniform(-2, 2)))


def _unique_vertices(simplices):
    flat = simplices.reshape(-1, simplices.shape[-1])
    keys = np.round(flat, 9)
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return inverse.reshape(simplices.shape[:2]), inverse.max() + 1


def random_piecewise_simplicial(simplices, seed: int, base_kind: str = "psd_quadratic",
                                amplitude: float = 2.0) -> ScalarField:
    """Convex base plus a random continuous PL function on a simplicial mesh.

    Affine on every simplex, hence convex there, while typically not
    convex on the union.
    """
    S = np.asarray(simplices, dtype=float)
    d = S.shape[-1]
    rng = np.random.default_rng([int(seed), 2000, d])
    idx, nv = _unique_vertices(S)
    nodal = rng.uniform(-amplitude, amplitude, nv)
    base = random_convex(base_kind, d, seed)
    pl = SimplicialPL(S, nodal[idx])
    return piecewise(base, pl, list(S), seed=seed,
                     params={"base": base_kind, "cells": "simplicial"})


def random_piecewise_conical(apex, facets, cells, seed: int,
                             base_kind: str = "psd_quadratic") -> ScalarField:
    """Convex base minus a random multiple of a star gauge about ``apex``.

    The gauge is linear on every cone over a facet, so the field is convex
    on each such cone (and on any cell inside one) but concave across cone
    boundaries.
    """
    apex = np.asarray(apex, dtype=float)
    d = apex.shape[0]
    rng = np.random.default_rng([int(seed), 3000, d])
    beta = float(rng.uniform(0.5, 2.0))
    base = random_convex(base_kind, d, seed)
    return piecewise(base, StarGauge(apex, facets, -beta), cells, seed=seed,
                     params={"base": base_kind, "cells": "conical"},
                     conical_about=tuple(apex))


def random_sector_field(center, radius: float, n_sectors: int, seed: int,
                        base_kind: str = "psd_quadratic") -> ScalarField:
    """Convex in each of ``n_sectors`` random angular sectors about ``center``."""
    c = np.asarray(center, dtype=float)
    rng = np.random.default_rng([int(seed), 4000, n_sectors])
    cuts = np.sort(rng.uniform(0, 2 * np.pi, n_sectors))
    gaps = np.diff(np.concatenate([cuts, [cuts[0] + 2 * np.pi]]))
    if gaps.max() >= np.pi:
        # keep every sector convex
        cuts = np.sort(np.concatenate([cuts, cuts[np.argmax(gaps)] + gaps.max() * np.arange(1, 3) / 3]))
    far = 4.0 * radius
    P = c + far * np.column_stack([np.cos(cuts), np.sin(cuts)])
    facets = np.stack([P, np.roll(P, -1, axis=0)], axis=1)
    cells = [np.vstack([c, f]) for f in facets]
    return random_piecewise_conical(c, facets, cells, seed, base_kind)


# ---------------------------------------------------------------------------
# JSON function specs

_EXPLICIT = {
    "constant": (("value", "d"), ()),
    "affine": (("gradient",), ("offset",)),
    "quadratic": (("matrix",), ("linear", "const")),
    "squared_norm": (("d",), ()),
    "neg_abs": (("normal",), ("offset",)),
}
_EXPLICIT_RANDOM_KINDS = {
    "max_affine": (("slopes", "offsets"), ()),
    "exp_affine": (("a",), ("b", "scale")),
    "norm_power": (("center", "p"), ("scale",)),
    "soft_max_affine": (("slopes", "offsets", "temperature"), ()),
}


def _check_fields(spec, required, optional):
    unknown = set(spec) - set(required) - set(optional) - {"kind"}
    if unknown:
        raise ValueError(f"unexpected fields {sorted(unknown)} for function {spec['kind']!r}")
    missing = [k for k in required if k not in spec]
    if missing:
        raise ValueError(f"missing fields {missing} for function {spec['kind']!r}")


def spec_is_seeded(spec: dict) -> bool:
    """True when the spec names a random family without fixing its seed."""
    kind = spec.get("kind")
    if kind in _EXPLICIT_RANDOM_KINDS and "d" not in spec:
        return False
    return (kind in RANDOM_KINDS or kind == "random_affine") and "seed" not in spec


def field_from_spec(spec: dict, seed: Optional[int] = None) -> ScalarField:
    """Build a field from ``{"kind": ..., ...}``.

    Random families take ``{"kind", "d", "seed"}`` (``seed`` may be supplied
    separately); ``max_affine``, ``soft_max_affine``, ``exp_affine`` and
    ``norm_power`` also accept explicit coefficients.  Explicit kinds:
    ``constant``, ``affine``, ``quadratic``, ``squared_norm``, ``neg_abs``.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("function spec must be an object with a 'kind'")
    kind = spec["kind"]
    if kind in RANDOM_KINDS + ("random_affine",) and "d" in spec:
        _check_fields(spec, ("d",), ("seed",))
        s = spec.get("seed", seed)
        if s is None:
            raise ValueError(f"function {kind!r} needs a seed")
        d = int(spec["d"])
        return random_affine(d, int(s)) if kind == "random_affine" else random_convex(kind, d, int(s))
    if kind in _EXPLICIT_RANDOM_KINDS:
        _check_fields(spec, *_EXPLICIT_RANDOM_KINDS[kind])
        if kind == "max_affine":
            return max_affine(spec["slopes"], spec["offsets"])
        if kind == "soft_max_affine":
            return soft_max_affine(spec["slopes"], spec["offsets"], float(spec["temperature"]))
        if kind == "exp_affine":
            return exp_affine(spec["a"], float(spec.get("b", 0.0)), float(spec.get("scale", 1.0)))
        return norm_power(spec["center"], float(spec["p"]), float(spec.get("scale", 1.0)))
    if kind not in _EXPLICIT:
        raise ValueError(f"unknown function kind {kind!r}")
    _check_fields(spec, *_EXPLICIT[kind])
    if kind == "constant":
        return constant(float(spec["value"]), int(spec["d"]))
    if kind == "affine":
        return affine(spec["gradient"], float(spec.get("offset", 0.0)))
    if kind == "quadratic":
        return quadratic(spec["matrix"], spec.get("linear"), float(spec.get("const", 0.0)))
    if kind == "squared_norm":
        return squared_norm(int(spec["d"]))
    return neg_abs(spec["normal"], float(spec.get("offset", 0.0)))


# ---------------------------------------------------------------------------
# convexity check


def _sample(region: Region, n: int, rng) -> np.ndarray:
    pieces = region.pieces
    w = np.array([p.measure() for p in pieces])
    choice = rng.choice(len(pieces), size=n, p=w / w.sum())
    out = np.empty((n, region.ambient))
    for i, piece in enumerate(pieces):
        sel = np.flatnonzero(choice == i)
        if not len(sel):
            continue
        if isinstance(piece, Simplex):
            lam = rng.dirichlet(np.ones(piece.dim + 1), size=len(sel))
            out[sel] = lam @ piece.array
        elif isinstance(piece, AnnulusSector):
            rho = np.sqrt(rng.uniform(piece.r_in**2, piece.r_out**2, len(sel)))
            th = rng.uniform(piece.theta0, piece.theta1, len(sel))
            out[sel] = (np.asarray(piece.center) + rho[:, None] * (
                np.outer(np.cos(th), piece.u) + np.outer(np.sin(th), piece.v)))
        elif isinstance(piece, Ball):
            g = rng.normal(size=(len(sel), 3))
            g /= np.linalg.norm(g, axis=1)[:, None]
            r = piece.radius * rng.uniform(0, 1, len(sel)) ** (1 / 3)
            out[sel] = np.asarray(piece.center) + r[:, None] * g
        else:
            raise ValueError(f"cannot sample {type(piece).__name__} for a convexity check")
    return out


def _is_convex_region(region: Region) -> bool:
    if len(region.pieces) == 1:
        p = region.pieces[0]
        if isinstance(p, (Simplex, Ball)):
            return True
        if isinstance(p, AnnulusSector):
            return p.r_in == 0 and (p.theta1 - p.theta0 <= math.pi + 1e-12
                                    or p.theta1 - p.theta0 >= 2 * math.pi - 1e-12)
        return False
    if not all(isinstance(p, Simplex) for p in region.pieces) or region.dim != region.ambient:
        return False
    pts = np.vstack([p.array for p in region.pieces])
    return math.isclose(ConvexHull(pts).volume, measure(region), rel_tol=1e-9)


def check_convex_on(f, region, samples: int = 1000, seed: int = 0):
    """Midpoint convexity test on random pairs from a convex region.

    Returns ``(True, None)`` or ``(False, (x, y))`` with a violating pair.
    """
    region = as_region(region)
    if not _is_convex_region(region):
        raise ValueError("convexity check needs a convex region")
    rng = np.random.default_rng(seed)
    X = _sample(region, samples, rng)
    Y = _sample(region, samples, rng)
    fx, fy, fm = f(X), f(Y), f((X + Y) / 2)
    slack = MIDPOINT_TOL * (1.0 + np.abs(fx) + np.abs(fy))
    bad = fm > (fx + fy) / 2 + slack
    if bad.any():
        i = int(np.argmax(bad))
        return False, (tuple(map(float, X[i])), tuple(map(float, Y[i])))
    return True, None
