"""Globally adaptive averaging over regions.

Every piece of a region is turned into a *pool* of cells.  A cell carries a
coarse estimate (its own rule) and a fine estimate (the composite rule on
its children); ``|coarse - fine|`` is its error estimate and the fine value
is accepted.  Each sweep marks the cells holding a fixed fraction of the
total error estimate (Dörfler marking) and replaces them by their children,
until the summed estimate drops to the tolerance.

All contributions are kept in *average* units (already divided by the
region's measure), so pools of different kinds share one marking step.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..geometry import (
    AnnulusSector, Ball, Circle, ConePatch, ConeSolid, Region, Simplex, Sphere,
    as_region, measure,
)
from . import rules
from .piecewise_affine import affine_pieces, max_affine_average, pieces_average

MARK_FRACTION = 0.6
DEFAULT_BUDGET = 10_000_000
CIRCLE_START_NODES = 64


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    pass


class EvaluationError(QuadratureError):
    """The integrand returned a non-finite value."""

    def __init__(self, point, value):
        self.point = tuple(float(c) for c in point)
        self.value = value
        super().__init__(f"integrand is not finite at {self.point}: {value!r}")


class BudgetExceeded(QuadratureError):
    """Tolerance not reached within the evaluation budget."""

    def __init__(self, best: QuadResult, tol: float, budget: int):
        self.best = best
        super().__init__(
            f"tolerance {tol:g} not reached within {budget} evaluations; "
            f"best estimate {best.value!r} +- {best.error_estimate:.3g}")


# ---------------------------------------------------------------------------
# field evaluation


def _native_terms(field) -> tuple:
    """Compiled-kernel terms whose sum is the field, or () for a plain callable."""
    native = getattr(field, "native", None)
    if native is None:
        return ()
    return native if isinstance(native, tuple) else (native,)


def _args(spec):
    return spec.code, spec.A, spec.b, spec.c, spec.center, spec.p


def _kinked_terms(field) -> list:
    return [s for s in _native_terms(field) if s.code in _kernels.KINKED]


def _kink_error(terms, V: np.ndarray, factor: float) -> np.ndarray:
    """Extra error for cells whose points ``V`` straddle a kink of the field.

    Rule values can agree across refinement levels by accident when every
    node falls on one affine piece, so such cells get ``factor`` times the
    field's spread on the cell.  For max-affine terms this bounds the rule
    error outright; for the other kinked terms it is a heuristic.
    """
    out = np.zeros(V.shape[0])
    for spec in terms:
        single, lo, hi = _kernels.piece_check(*_args(spec), V)
        out += np.where(single, 0.0, factor * (hi - lo))
    return out


def _evaluate(field, X: np.ndarray) -> np.ndarray:
    native = _native_terms(field)
    if native:
        vals = _kernels.eval_native(*_args(native[0]), X)
        for spec in native[1:]:
            vals = vals + _kernels.eval_native(*_args(spec), X)
    else:
        vals = np.asarray(field(X), dtype=float).reshape(-1)
    _check_finite(vals, X)
    return vals


def _check_finite(vals, X):
    ok = np.isfinite(vals)
    if not ok.all():
        i = int(np.argmin(ok))
        raise EvaluationError(X[i], vals[i])


def _simplex_means(field, V, bary, w):
    native = _native_terms(field)
    if native:
        means = _kernels.simplex_means(*_args(native[0]), V, bary, w)
        for spec in native[1:]:
            means = means + _kernels.simplex_means(*_args(spec), V, bary, w)
        if not np.isfinite(means).all():
            # locate the offending point on the slow path
            E, _, d = V.shape
            X = np.einsum("qi,eid->eqd", bary, V).reshape(-1, d)
            _evaluate(field, X)
        return means
    E, _, d = V.shape
    X = np.einsum("qi,eid->eqd", bary, V).reshape(-1, d)
    return _evaluate(field, X).reshape(E, -1) @ w


# ---------------------------------------------------------------------------
# pools


class _PointPool:
    def __init__(self, field, pts: np.ndarray, frac: float):
        vals = _evaluate(field, pts)
        self.total = frac * math.fsum(vals)
        self.err = np.zeros(0)
        self.evaluations = len(pts)

    def value(self):
        return self.total

    def refine(self, mask):
        pass


class _SimplexPool:
    def __init__(self, field, V: np.ndarray, inv_total: float):
        self.field = field
        k = V.shape[1] - 1
        self.bary, self.w = rules.simplex_rule(k)
        self.table = rules.kuhn_children(k)
        self.nc = self.table.shape[0]
        self.evaluations = 0
        self.kinks = _kinked_terms(field)
        # the true mean and the rule both stay within the spread of a convex
        # cell; a rule with negative weights may overshoot by its weight mass
        w1 = float(np.abs(self.w).sum() / self.w.sum())
        self.kink_factor = 1.0 if self.w.min() >= 0 else 1.0 + w1
        vols = np.array([Simplex(tuple(map(tuple, s))).measure() for s in V])
        self.V = np.ascontiguousarray(V, dtype=float)
        self.frac = vols * inv_total
        coarse = self._means(self.V)
        self._set_fine(self.V, self.frac, coarse)

    def _means(self, V):
        self.evaluations += V.shape[0] * self.bary.shape[0]
        return _simplex_means(self.field, V, self.bary, self.w)

    def _set_fine(self, V, frac, coarse):
        kids = _kernels.subdivide(V, self.table)
        child_means = self._means(kids).reshape(-1, self.nc)
        fine = child_means.mean(axis=1)
        self.V, self.frac = V, frac
        self.child_means = child_means
        self.fine = fine
        self.err = frac * np.abs(coarse - fine)
        if self.kinks:
            self.evaluations += V.shape[0] * V.shape[1] * len(self.kinks)
            self.err = self.err + frac * _kink_error(self.kinks, V, self.kink_factor)

    def value(self):
        return float(np.sum(self.frac * self.fine))

    def refine(self, mask):
        keep = ~mask
        kids = _kernels.subdivide(self.V[mask], self.table)
        kid_frac = np.repeat(self.frac[mask] / self.nc, self.nc)
        kid_coarse = self.child_means[mask].reshape(-1)
        old = (self.V[keep], self.frac[keep], self.child_means[keep], self.fine[keep], self.err[keep])
        self._set_fine(kids, kid_frac, kid_coarse)
        self.V = np.concatenate([old[0], self.V])
        self.frac = np.concatenate([old[1], self.frac])
        self.child_means = np.concatenate([old[2], self.child_means])
        self.fine = np.concatenate([old[3], self.fine])
        self.err = np.concatenate([old[4], self.err])


class _BoxPool:
    """Tensor Gauss-Legendre cells in a piece's parameter box."""

    def __init__(self, field, param, inv_total: float):
        self.field = field
        self.param = param
        m = len(param.lo)
        self.nodes, self.w = rules.box_rule(m)
        self.child_lo, self.child_hi = rules.box_children(m)
        self.nc = self.child_lo.shape[0]
        self.scale = inv_total
        self.evaluations = 0
        self.kinks = _kinked_terms(field)
        self.corners = np.array(list(itertools.product((0.0, 1.0), repeat=m)) + [[0.5] * m])
        lo, hi = param.initial_cells()
        coarse = self._integrals(lo, hi)
        self._set_fine(lo, hi, coarse)

    def _integrals(self, lo, hi):
        width = hi - lo
        P = (lo[:, None, :] + width[:, None, :] * self.nodes[None, :, :]).reshape(-1, lo.shape[1])
        X, J = self.param.map(P)
        self.evaluations += P.shape[0]
        vals = _evaluate(self.field, X) * J
        return (vals.reshape(lo.shape[0], -1) @ self.w) * np.prod(width, axis=1) * self.scale

    def _mass(self, lo, hi):
        width = hi - lo
        P = (lo[:, None, :] + width[:, None, :] * self.nodes[None, :, :]).reshape(-1, lo.shape[1])
        J = self.param.map(P)[1]
        return (J.reshape(lo.shape[0], -1) @ self.w) * np.prod(width, axis=1) * self.scale

    def _kink(self, lo, hi):
        # corners and center of a curved cell only sample it, so this is heuristic
        width = hi - lo
        P = (lo[:, None, :] + width[:, None, :] * self.corners[None]).reshape(-1, lo.shape[1])
        X = self.param.map(P)[0]
        self.evaluations += X.shape[0] * len(self.kinks)
        extra = _kink_error(self.kinks, X.reshape(lo.shape[0], len(self.corners), -1), 1.0)
        hit = extra > 0
        if hit.any():
            extra[hit] *= self._mass(lo[hit], hi[hit])
        return extra

    def _children(self, lo, hi):
        width = hi - lo
        clo = (lo[:, None, :] + width[:, None, :] * self.child_lo[None]).reshape(-1, lo.shape[1])
        chi = (lo[:, None, :] + width[:, None, :] * self.child_hi[None]).reshape(-1, lo.shape[1])
        return clo, chi

    def _set_fine(self, lo, hi, coarse):
        clo, chi = self._children(lo, hi)
        child = self._integrals(clo, chi).reshape(-1, self.nc)
        self.lo, self.hi = lo, hi
        self.child = child
        self.fine = child.sum(axis=1)
        self.err = np.abs(coarse - self.fine)
        if self.kinks:
            self.err = self.err + self._kink(lo, hi)

    def value(self):
        return float(np.sum(self.fine))

    def refine(self, mask):
        keep = ~mask
        clo, chi = self._children(self.lo[mask], self.hi[mask])
        coarse = self.child[mask].reshape(-1)
        old = (self.lo[keep], self.hi[keep], self.child[keep], self.fine[keep], self.err[keep])
        self._set_fine(clo, chi, coarse)
        self.lo = np.concatenate([old[0], self.lo])
        self.hi = np.concatenate([old[1], self.hi])
        self.child = np.concatenate([old[2], self.child])
        self.fine = np.concatenate([old[3], self.fine])
        self.err = np.concatenate([old[4], self.err])


class _CirclePool:
    """Periodic trapezoid rule with node doubling."""

    def __init__(self, field, circle: Circle, frac: float):
        self.field, self.circle, self.frac = field, circle, frac
        self.evaluations = 0
        self.n = CIRCLE_START_NODES
        s_coarse = self._sum(np.arange(self.n) / self.n)
        s_new = self._sum((np.arange(self.n) + 0.5) / self.n)
        self.sum_fine = s_coarse + s_new
        self.coarse = s_coarse / self.n
        self._update()

    def _sum(self, t):
        c = np.asarray(self.circle.center)
        th = 2.0 * np.pi * t
        X = c + self.circle.radius * (np.outer(np.cos(th), self.circle.u)
                                      + np.outer(np.sin(th), self.circle.v))
        self.evaluations += len(t)
        return math.fsum(_evaluate(self.field, X))

    def _update(self):
        self.fine = self.sum_fine / (2 * self.n)
        self.err = np.array([self.frac * abs(self.coarse - self.fine)])

    def value(self):
        return self.frac * self.fine

    def refine(self, mask):
        if not mask[0]:
            return
        self.coarse = self.fine
        self.n *= 2
        self.sum_fine += self._sum((np.arange(self.n) + 0.5) / self.n)
        self._update()


# ---------------------------------------------------------------------------
# parametrizations of curved pieces


def _e(theta, u, v):
    return np.outer(np.cos(theta), u) + np.outer(np.sin(theta), v)


class _AnnulusParam:
    """Polar cells; ``cuts`` are extra angles where the integrand has a kink."""

    def __init__(self, p: AnnulusSector, cuts=()):
        self.p = p
        self.lo = np.array([p.r_in, p.theta0])
        self.hi = np.array([p.r_out, p.theta1])
        self.cuts = cuts

    def initial_cells(self):
        t0, t1 = self.lo[1], self.hi[1]
        grid = np.linspace(t0, t1, _angular_cells(t1 - t0) + 1)
        extra = [t0 + (c - t0) % (2 * np.pi) for c in self.cuts]
        pad = 1e-9 * (t1 - t0)
        grid = np.unique(np.concatenate([grid, [t for t in extra if t0 + pad < t < t1 - pad]]))
        lo = np.column_stack([np.full(len(grid) - 1, self.lo[0]), grid[:-1]])
        hi = np.column_stack([np.full(len(grid) - 1, self.hi[0]), grid[1:]])
        return lo, hi

    def map(self, P):
        rho, th = P[:, 0], P[:, 1]
        X = np.asarray(self.p.center) + rho[:, None] * _e(th, self.p.u, self.p.v)
        return X, rho


class _ConePatchParam:
    """(t, theta): t runs from the apex (0) to the base circle (1)."""

    def __init__(self, p: ConePatch, inverse_axis_weight: bool = False):
        self.p = p
        self.weighted = inverse_axis_weight
        self.lo = np.array([0.0, p.theta0])
        self.hi = np.array([1.0, p.theta1])
        self.apex = np.asarray(p.apex)

    def initial_cells(self):
        return _split(self.lo, self.hi, [1, _angular_cells(self.hi[1] - self.lo[1])])

    def map(self, P):
        t, th = P[:, 0], P[:, 1]
        base = np.asarray(self.p.center) + self.p.radius * _e(th, self.p.u, self.p.v)
        X = self.apex + t[:, None] * (base - self.apex)
        if self.weighted:
            # dS / dist(x, axis) = slant dt dtheta: the singularity cancels
            return X, np.full_like(t, self.p.slant)
        return X, t * self.p.radius * self.p.slant


class _ConeSolidParam:
    """(rho, theta, s): height interpolates between the two cone surfaces."""

    def __init__(self, p: ConeSolid):
        self.p = p
        self.lo = np.array([0.0, 0.0, 0.0])
        self.hi = np.array([p.radius, 2.0 * np.pi, 1.0])
        self.n = np.cross(p.u, p.v)

    def initial_cells(self):
        return _split(self.lo, self.hi, [1, 4, 1])

    def map(self, P):
        rho, th, s = P[:, 0], P[:, 1], P[:, 2]
        R, h0, h1 = self.p.radius, self.p.h0, self.p.h1
        taper = 1.0 - rho / R
        z = taper * (h0 + s * (h1 - h0))
        X = (np.asarray(self.p.center) + rho[:, None] * _e(th, self.p.u, self.p.v)
             + z[:, None] * self.n)
        return X, rho * taper * abs(h1 - h0)


class _BallParam:
    def __init__(self, p: Ball):
        self.p = p
        self.lo = np.array([0.0, 0.0, 0.0])
        self.hi = np.array([p.radius, 2.0 * np.pi, np.pi])

    def initial_cells(self):
        return _split(self.lo, self.hi, [1, 4, 2])

    def map(self, P):
        r, th, ph = P[:, 0], P[:, 1], P[:, 2]
        sp = np.sin(ph)
        D = np.column_stack([sp * np.cos(th), sp * np.sin(th), np.cos(ph)])
        return np.asarray(self.p.center) + r[:, None] * D, r * r * sp


class _SphereParam:
    def __init__(self, p: Sphere):
        self.p = p
        self.lo = np.array([0.0, 0.0])
        self.hi = np.array([2.0 * np.pi, np.pi])

    def initial_cells(self):
        return _split(self.lo, self.hi, [4, 2])

    def map(self, P):
        th, ph = P[:, 0], P[:, 1]
        sp = np.sin(ph)
        D = np.column_stack([sp * np.cos(th), sp * np.sin(th), np.cos(ph)])
        R = self.p.radius
        return np.asarray(self.p.center) + R * D, R * R * sp


def _angular_cells(span):
    return max(1, int(math.ceil(4.0 * span / (2.0 * np.pi) - 1e-9)))


def _split(lo, hi, counts):
    grids = [np.linspace(a, b, n + 1) for a, b, n in zip(lo, hi, counts)]
    los, his = [], []
    for idx in np.ndindex(*counts):
        los.append([g[i] for g, i in zip(grids, idx)])
        his.append([g[i + 1] for g, i in zip(grids, idx)])
    return np.array(los, dtype=float), np.array(his, dtype=float)


def _ray_angles(field, piece: AnnulusSector) -> list:
    """Angles of the cone boundaries of planar gauge terms centred on ``piece``."""
    out = []
    c = np.asarray(piece.center, dtype=float)
    for t in _native_terms(field):
        if t.code != _kernels.STAR_GAUGE or t.center.shape[0] != 2:
            continue
        if np.abs(t.center - c).max() > 1e-12 * (1.0 + np.abs(c).max()):
            continue
        for M in t.A.reshape(-1, 2, 2):
            D = np.linalg.inv(M)
            out += [math.atan2(D[:, k] @ piece.v, D[:, k] @ piece.u) for k in range(2)]
    return out


def _param_for(piece, inverse_axis_weight=False, field=None):
    if isinstance(piece, AnnulusSector):
        return _AnnulusParam(piece, _ray_angles(field, piece) if field is not None else ())
    if isinstance(piece, ConePatch):
        return _ConePatchParam(piece, inverse_axis_weight)
    if isinstance(piece, ConeSolid):
        return _ConeSolidParam(piece)
    if isinstance(piece, Ball):
        return _BallParam(piece)
    if isinstance(piece, Sphere):
        return _SphereParam(piece)
    raise TypeError(f"no parametrization for {type(piece).__name__}")


# ---------------------------------------------------------------------------
# driver


class _Terms:
    """The native terms of a field that are left after exact integration."""

    def __init__(self, terms):
        self.native = tuple(terms)


class _ExactPool:
    """Piecewise-affine terms integrated exactly over simplex pieces."""

    def __init__(self, total: float, evaluations: int):
        self.total = total
        self.err = np.zeros(0)
        self.evaluations = evaluations

    def value(self):
        return self.total

    def refine(self, mask):
        pass


def _exact_term_averages(spec, V: np.ndarray):
    """Exact per-simplex averages of one native term, or ``None``."""
    if spec.code == _kernels.MAX_AFFINE:
        return [max_affine_average(spec.A, spec.b, S) for S in V]
    pieces = affine_pieces(spec.code, spec.A, spec.b, spec.c, spec.center, V.shape[2])
    out = []
    for S in V:
        v = pieces_average(pieces, S)
        if v is None:
            return None
        out.append(v)
    return out


def _exact_pool(field, V: np.ndarray, frac: np.ndarray):
    """Exact pool for the kinked terms of ``field`` and a field holding the rest.

    The rest is ``None`` when nothing is left for adaptive quadrature.
    """
    terms = _native_terms(field)
    kinked = [t for t in terms if t.code in _kernels.KINKED]
    if not kinked:
        return None, field
    done, parts = [], []
    for t in kinked:
        avgs = _exact_term_averages(t, V)
        if avgs is not None:
            done.append(t)
            parts.append(math.fsum(f * a for f, a in zip(frac, avgs)))
    if not done:
        return None, field
    rest = [t for t in terms if not any(t is u for u in done)]
    pool = _ExactPool(math.fsum(parts), int(V.shape[0] * V.shape[1] * len(done)))
    return pool, (_Terms(rest) if rest else None)


def _build_pools(field, region: Region, total: float, inverse_axis_weight: bool):
    pools = []
    inv = 1.0 / total
    simplices = [p for p in region.pieces if isinstance(p, Simplex)]
    if simplices:
        if region.dim == 0:
            pts = np.array([s.vertices[0] for s in simplices], dtype=float)
            pools.append(_PointPool(field, pts, inv))
        else:
            V = np.array([s.vertices for s in simplices], dtype=float)
            exact, rest = None, field
            if not inverse_axis_weight:
                frac = np.array([s.measure() for s in simplices]) * inv
                exact, rest = _exact_pool(field, V, frac)
            if exact is not None:
                pools.append(exact)
            if rest is not None:
                pools.append(_SimplexPool(rest, V, inv))
    for piece in region.pieces:
        if isinstance(piece, Simplex):
            continue
        if isinstance(piece, Circle):
            pools.append(_CirclePool(field, piece, piece.measure() * inv))
        else:
            pools.append(_BoxPool(field, _param_for(piece, inverse_axis_weight, field), inv))
    return pools


def _mark(errs: np.ndarray, total: float) -> np.ndarray:
    order = np.argsort(-errs, kind="stable")
    csum = np.cumsum(errs[order])
    cut = int(np.searchsorted(csum, MARK_FRACTION * total))
    cut = min(cut, len(errs) - 1)
    threshold = errs[order[cut]]
    return errs >= threshold


def adaptive_average(field, region, tol: float, budget: int = DEFAULT_BUDGET,
                     inverse_axis_weight: bool = False) -> QuadResult:
    region = as_region(region)
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    const = getattr(field, "constant", None)
    if const is not None and not inverse_axis_weight:
        return QuadResult(float(const), 0.0, 0)
    total_measure = measure(region)
    pools = _build_pools(field, region, total_measure, inverse_axis_weight)

    def snapshot():
        err = math.fsum(math.fsum(p.err) for p in pools)
        val = math.fsum(p.value() for p in pools)
        evals = sum(p.evaluations for p in pools)
        return QuadResult(val, err, evals)

    while True:
        res = snapshot()
        if res.error_estimate <= tol:
            return res
        if res.evaluations > budget:
            raise BudgetExceeded(res, tol, budget)
        sizes = [len(p.err) for p in pools]
        errs = np.concatenate([p.err for p in pools])
        mask = _mark(errs, float(errs.sum()))
        start = 0
        for p, n in zip(pools, sizes):
            m = mask[start:start + n]
            start += n
            if n and m.any():
                p.refine(m)
