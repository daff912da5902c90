"""Bound expressions over simplices and their numerical evaluation.

A :class:`BoundExpression` compares ``Avg(f, target)`` with a convex
combination of averages over other regions.  Two generators build them from
a simplex: :func:`theorem_R_bound` (face partitions, an upper bound) and
:func:`theorem_L_chain` (nested homothetic sub-simplices, lower bounds).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .geometry import (
    Region, Simplex, as_region, barycenter, point_mass,
    region_from_dict, region_to_dict, sub_simplex, subset_simplex,
)
from .quadrature import DEFAULT_BUDGET, BudgetExceeded, QuadResult, average, average_weighted

LOWER, UPPER = "lower", "upper"
WEIGHT_SUM_TOL = 1e-12
EQUAL_MEASURE_RTOL = 1e-10
ROUNDOFF_FACTOR = 256 * np.finfo(float).eps

Tolerance = Union[float, Mapping[int, float]]


class BoundError(ValueError):
    pass


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class VertexPartition:
    """Two disjoint nonempty vertex index sets."""

    K: frozenset
    L: frozenset

    def __post_init__(self):
        K, L = frozenset(self.K), frozenset(self.L)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "L", L)
        if not K or not L:
            raise BoundError("partition sets must be nonempty")
        if K & L:
            raise BoundError(f"partition sets overlap in {sorted(K & L)}")

    def check(self, n_vertices: int) -> None:
        bad = [i for i in self.K | self.L if not 0 <= i < n_vertices]
        if bad:
            raise BoundError(f"indices {sorted(bad)} out of range for {n_vertices} vertices")


@dataclass(frozen=True)
class AxisWeight:
    """Replace ``Avg(f, region)`` by ``factor * Avg(f / dist(., axis), region)``."""

    point: tuple
    direction: tuple
    factor: float


@dataclass(frozen=True)
class Term:
    weight: Fraction
    region: Region
    axis_weight: Optional[AxisWeight] = None


def _fraction(w) -> Fraction:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, str):
        return Fraction(w)
    return Fraction(float(w))


def normalized_weights(weights: Sequence) -> list[Fraction]:
    """Exact fractions summing to one.

    Float weights within ``1e-12`` of summing to one get their last entry
    adjusted so the sum is exact.
    """
    ws = [_fraction(w) for w in weights]
    total = sum(ws, Fraction(0))
    if total != 1:
        if abs(float(total) - 1.0) > WEIGHT_SUM_TOL:
            raise BoundError(f"weights sum to {float(total)!r}, not 1")
        ws[-1] += 1 - total
    return ws


@dataclass(frozen=True)
class BoundExpression:
    """``Avg(f, target) <= sum w_i Avg(f, region_i)`` (upper) or ``>=`` (lower)."""

    direction: str
    target: Region
    terms: tuple[Term, ...]
    label: str = ""

    def __post_init__(self):
        if self.direction not in (LOWER, UPPER):
            raise BoundError(f"direction must be 'lower' or 'upper', got {self.direction!r}")
        object.__setattr__(self, "target", as_region(self.target))
        terms = tuple(self.terms)
        if not terms:
            raise BoundError("bound expression needs at least one term")
        for t in terms:
            if t.weight < 0:
                raise BoundError(f"negative weight {t.weight}")
            if t.region.ambient != self.target.ambient:
                raise BoundError("term and target live in different dimensions")
        if sum((t.weight for t in terms), Fraction(0)) != 1:
            raise BoundError("weights must sum to exactly 1")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def build(cls, direction: str, target, weighted_regions, label: str = "") -> "BoundExpression":
        """From ``[(weight, region), ...]`` with weights normalized exactly."""
        pairs = list(weighted_regions)
        ws = normalized_weights([w for w, _ in pairs])
        return cls(direction, as_region(target),
                   tuple(Term(w, as_region(r)) for w, (_, r) in zip(ws, pairs)), label)

    def reversed(self) -> "BoundExpression":
        return BoundExpression(LOWER if self.direction == UPPER else UPPER,
                               self.target, self.terms, f"reversed({self.label})")

    def merged(self) -> "BoundExpression":
        """Equivalent expression with equal regions' weights summed."""
        acc: dict = {}
        for t in self.terms:
            key = (t.region, t.axis_weight)
            acc[key] = acc.get(key, Fraction(0)) + t.weight
        terms = tuple(Term(w, r, a) for (r, a), w in acc.items() if w != 0)
        return BoundExpression(self.direction, self.target, terms, self.label)


@dataclass(frozen=True)
class BoundReport:
    """``gap = rhs - lhs`` is nonnegative when the inequality holds.

    ``lhs`` is the smaller side as written: the target for an upper bound,
    the combination for a lower bound.
    """

    lhs: QuadResult
    rhs: QuadResult
    gap: float
    holds: bool
    slack_tolerance: float
    label: str = ""


# ---------------------------------------------------------------------------
# generators


def theorem_R_bound(s: Simplex, p: VertexPartition) -> BoundExpression:
    """Average over the face on K u L bounded by the cardinality mix of faces K and L."""
    p.check(len(s.vertices))
    KL = p.K | p.L
    n = len(KL)
    return BoundExpression(
        UPPER, as_region(sub_simplex(s, KL)),
        (Term(Fraction(len(p.K), n), as_region(sub_simplex(s, p.K))),
         Term(Fraction(len(p.L), n), as_region(sub_simplex(s, p.L)))),
        f"partition K={sorted(p.K)} L={sorted(p.L)}")


def all_partitions(n_vertices: int) -> list[VertexPartition]:
    """Every unordered pair of disjoint nonempty index sets."""
    out = []
    idx = range(n_vertices)
    for labels in itertools.product((0, 1, 2), repeat=n_vertices):
        K = frozenset(i for i in idx if labels[i] == 1)
        L = frozenset(i for i in idx if labels[i] == 2)
        if K and L and min(K) < min(L):
            out.append(VertexPartition(K, L))
    return out


def theorem_L_chain(s: Simplex, K: Iterable[int], L: Iterable[int]) -> list[BoundExpression]:
    """``f(b) <= Avg(D^[L]) <= Avg(D^[K]) <= Avg(D)`` as three lower bounds."""
    K, L = frozenset(K), frozenset(L)
    n = len(s.vertices)
    full = frozenset(range(n))
    if not K <= L:
        raise BoundError(f"K={sorted(K)} is not contained in L={sorted(L)}")
    if L == full or not L <= full:
        raise BoundError(f"L={sorted(L)} is not a proper subset of the vertex indices")
    dK, dL = subset_simplex(s, K), subset_simplex(s, L)
    b = point_mass(barycenter(s))
    tag = f"K={sorted(K)} L={sorted(L)}"
    one = Fraction(1)
    return [
        BoundExpression(LOWER, as_region(dL), (Term(one, as_region(b)),), f"barycenter <= D^[L] {tag}"),
        BoundExpression(LOWER, as_region(dK), (Term(one, as_region(dL)),), f"D^[L] <= D^[K] {tag}"),
        BoundExpression(LOWER, as_region(s), (Term(one, as_region(dK)),), f"D^[K] <= D {tag}"),
    ]


def all_chains(n_vertices: int) -> list[tuple[frozenset, frozenset]]:
    """Every nested pair ``K <= L`` of proper index subsets."""
    out = []
    for labels in itertools.product((0, 1, 2), repeat=n_vertices):
        # 2: in K (hence L), 1: in L only, 0: outside L
        if 0 not in labels:
            continue
        K = frozenset(i for i, v in enumerate(labels) if v == 2)
        L = frozenset(i for i, v in enumerate(labels) if v >= 1)
        out.append((K, L))
    return out


def triangle_choices(t: Simplex, include_full: bool = True) -> list[Region]:
    """The homothetic sub-simplices through the barycenter used for lower bounds.

    The triangle itself (when ``include_full``) and the three segments
    parallel to its sides.
    """
    if t.dim != 2:
        raise BoundError("lower-bound choices are defined for triangles")
    out = [as_region(t)] if include_full else []
    out += [as_region(subset_simplex(t, {i})) for i in range(3)]
    return out


def enumerate_lower_bounds(triangles: Sequence[Simplex],
                           include_full: bool = True) -> list[BoundExpression]:
    """One equal-weight lower bound per selection of a choice in each triangle."""
    triangles = list(triangles)
    if not triangles:
        raise BoundError("need at least one triangle")
    areas = [t.measure() for t in triangles]
    if max(areas) - min(areas) > EQUAL_MEASURE_RTOL * max(areas):
        raise BoundError(f"triangles have unequal areas {areas}")
    target = Region(tuple(triangles))
    w = Fraction(1, len(triangles))
    per = [triangle_choices(t, include_full) for t in triangles]
    out = []
    for sel in itertools.product(*[range(len(c)) for c in per]):
        terms = tuple(Term(w, per[i][j]) for i, j in enumerate(sel))
        out.append(BoundExpression(LOWER, target, terms, "choice " + "".join(map(str, sel))))
    return out


# ---------------------------------------------------------------------------
# evaluation


def tol_for(tol: Tolerance, dim: int) -> float:
    if isinstance(tol, Mapping):
        if dim not in tol:
            raise BoundError(f"no tolerance given for dimension {dim}")
        return float(tol[dim])
    return float(tol)


class AverageCache:
    """Memo of region averages keyed by field identity, region and accuracy.

    Holds a reference to each field so identities cannot be recycled.  With
    ``accept_best`` an exhausted budget yields the best estimate (whose
    error estimate then exceeds the tolerance) instead of an exception;
    ``over_budget`` counts such cases.
    """

    def __init__(self, accept_best: bool = False):
        self._store: dict = {}
        self._fields: dict = {}
        self.accept_best = accept_best
        self.hits = 0
        self.misses = 0
        self.over_budget = 0

    def average(self, f, region: Region, tol: float, budget: int,
                axis_weight: Optional[AxisWeight] = None) -> QuadResult:
        key = (id(f), region, tol, budget, axis_weight)
        hit = self._store.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        self._fields[id(f)] = f
        try:
            res = _average(f, region, tol, budget, axis_weight)
        except BudgetExceeded as exc:
            if not self.accept_best:
                raise
            self.over_budget += 1
            res = exc.best
        self._store[key] = res
        return res

    def __len__(self) -> int:
        return len(self._store)


def _average(f, region, tol, budget, axis_weight):
    if axis_weight is None:
        return average(f, region, tol, budget)
    c = axis_weight.factor

    def scaled(res):
        return QuadResult(c * res.value, abs(c) * res.error_estimate, res.evaluations)

    try:
        res = average_weighted(f, region, (axis_weight.point, axis_weight.direction), tol, budget)
    except BudgetExceeded as exc:
        raise BudgetExceeded(scaled(exc.best), tol, budget) from None
    return scaled(res)


def combine(parts: Sequence[tuple[float, QuadResult]]) -> QuadResult:
    value = math.fsum(w * r.value for w, r in parts)
    err = math.fsum(abs(w) * r.error_estimate for w, r in parts)
    return QuadResult(value, err, sum(r.evaluations for _, r in parts))


def evaluate(b: BoundExpression, f, tol: Tolerance = 1e-8, budget: int = DEFAULT_BUDGET,
             cache: Optional[AverageCache] = None) -> BoundReport:
    """Integrate both sides of ``b`` and decide whether it holds within slack.

    ``tol`` is a float or a mapping from intrinsic dimension to tolerance.
    The slack is the summed error estimate of both sides plus a round-off
    floor proportional to the magnitudes involved.
    """
    cache = cache if cache is not None else AverageCache()

    def avg(region, axis_weight=None):
        return cache.average(f, region, tol_for(tol, region.dim), budget, axis_weight)

    target = avg(b.target)
    parts = [(float(t.weight), avg(t.region, t.axis_weight)) for t in b.terms]
    mix = combine(parts)
    lhs, rhs = (target, mix) if b.direction == UPPER else (mix, target)
    gap = rhs.value - lhs.value
    scale = 1.0 + abs(target.value) + math.fsum(abs(w * r.value) for w, r in parts)
    slack = lhs.error_estimate + rhs.error_estimate + ROUNDOFF_FACTOR * scale
    return BoundReport(lhs, rhs, gap, bool(gap >= -slack), slack, b.label)


# ---------------------------------------------------------------------------
# JSON form


def _weight_str(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(w.numerator)


def expression_to_dict(b: BoundExpression) -> dict:
    terms = []
    for t in b.terms:
        d = {"w": _weight_str(t.weight), "region": region_to_dict(t.region)}
        if t.axis_weight is not None:
            a = t.axis_weight
            d["axis_weight"] = {"point": list(a.point), "direction": list(a.direction),
                                "factor": a.factor}
        terms.append(d)
    return {"direction": b.direction, "target": region_to_dict(b.target),
            "terms": terms, "label": b.label}


def expression_from_dict(d: dict) -> BoundExpression:
    unknown = set(d) - {"direction", "target", "terms", "label"}
    if unknown:
        raise BoundError(f"unexpected fields {sorted(unknown)}")
    terms = []
    for t in d["terms"]:
        aw = t.get("axis_weight")
        axis = None if aw is None else AxisWeight(tuple(aw["point"]), tuple(aw["direction"]),
                                                   float(aw["factor"]))
        terms.append(Term(Fraction(t["w"]), region_from_dict(t["region"]), axis))
    return BoundExpression(d["direction"], region_from_dict(d["target"]), tuple(terms),
                           d.get("label", ""))


__all__ = [
    "LOWER", "UPPER", "BoundError", "VertexPartition", "AxisWeight", "Term",
    "BoundExpression", "BoundReport", "theorem_R_bound", "theorem_L_chain",
    "all_partitions", "all_chains", "triangle_choices", "enumerate_lower_bounds",
    "evaluate", "AverageCache", "combine", "tol_for", "normalized_weights",
    "expression_to_dict", "expression_from_dict",
]
