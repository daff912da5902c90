"""Verification harness: catalog entries against seeded test functions.

Each check evaluates every expression an entry generates for one shape and
one field, and condenses them into a :class:`CheckRow` reporting the tightest
expression.  Fields for sweeps are drawn to match each entry's convexity
hypothesis: globally convex families always, and piecewise-convex fields
built on the entry's own cells when the hypothesis allows them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import catalog
from .catalog import CatalogEntry, Hypothesis
from .geometry import Simplex
from .quadrature import DEFAULT_BUDGET
from .shapes import (
    Annulus, BallShape, CubeSplit, Dicone, Dipyramid, DiskShape, Fan, NicePolygon,
    Parallelogram, PlatonicBody, QuadrilateralEH, Shape, SimplexShape, StarPolytope,
    dicone_limit_mesh,
)
from .simplex_bounds import UPPER, AverageCache, Tolerance, evaluate
from .testfuncs import (
    CONVEX_KINDS, SMOOTH_CONVEX_KINDS, ScalarField, random_convex, random_piecewise_conical,
    random_piecewise_simplicial, random_sector_field,
)

SWEEP_TOL = {0: 1.0, 1: 1e-9, 2: 1e-8, 3: 1e-5}
CENTER_ATOL = 1e-12
CONVERGE_NS = (6, 12, 24, 48, 96)


@dataclass(frozen=True)
class CheckRow:
    """Outcome of one entry on one shape and field.

    ``lhs``, ``rhs``, ``gap`` and ``slack`` belong to the reported
    expression: the one with minimal ``rhs`` for ``min`` reducers, otherwise
    the one with the smallest ``gap + slack``.  ``holds`` is true when every
    generated expression holds within its slack.
    """

    entry_id: str
    paper_anchor: str
    shape: str
    function_kind: str
    seed: Optional[int]
    lhs: float
    rhs: float
    gap: float
    slack: float
    holds: bool
    hypothesis_met: bool
    label: str
    n_expressions: int

    def as_dict(self) -> dict:
        return asdict(self)


def canonical_shapes() -> dict[str, Shape]:
    """Fixed test shapes covering every catalog entry."""
    return {
        "segment": SimplexShape(((0.0,), (1.0,))),
        "triangle": SimplexShape(((0.0, 0.0), (1.0, 0.0), (0.3, 0.9))),
        "tetrahedron": SimplexShape(((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.2, 1.0, 0.0), (0.3, 0.4, 1.0))),
        "disk": DiskShape(1.0),
        "ball": BallShape(1.0),
        "hexagon": NicePolygon.regular(6),
        "quadrilateral": QuadrilateralEH(((0.0, 0.0), (0.5, -1.0), (2.0, 0.0), (1.2, 1.0))),
        "parallelogram": Parallelogram(((0.0, 0.0), (2.0, 0.0), (2.5, 1.0), (0.5, 1.0))),
        "diamond": Parallelogram(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))),
        "kite": NicePolygon(((2.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)), (0.5, 0.0)),
        "rhombus": NicePolygon(((2.0, 0.0), (0.0, 1.0), (-2.0, 0.0), (0.0, -1.0)), (0.0, 0.0)),
        "fan": Fan((0.0, 0.0), tuple((r * math.cos(a), r * math.sin(a))
                                     for r, a in ((1.0, 0.0), (1.5, 0.7), (1.0, 1.4), (1.5, 2.1)))),
        "annulus": Annulus(1.0, 2.0),
        **{b: PlatonicBody(b) for b in ("tetra", "cube", "octa", "icosa", "dodeca")},
        "star_cube": StarPolytope("cube", 1.0, height=0.3),
        "star_octa_excavated": StarPolytope("octa", 1.0, height=0.2, signs=(-1,) * 8),
        "star_cube_mixed": StarPolytope("cube", 1.0, height=0.3, signs=(1, -1, 1, -1, 1, -1)),
        "dipyramid": Dipyramid(6, 1.0, -1.0, 0.7),
        "dipyramid_nonconvex": Dipyramid(5, 1.0, 1.5, 0.5),
        "dicone": Dicone(1.0, -1.0, 0.8),
        "cube_split": CubeSplit(1.0),
    }


# ---------------------------------------------------------------------------
# hypotheses and fields


def _center(shape: Shape):
    return tuple(getattr(shape, "center"))


def hypothesis_met(hyp: Hypothesis, shape: Shape, f: ScalarField) -> bool:
    """Whether ``f`` is declared convex where ``hyp`` requires on ``shape``."""
    if f.globally_convex:
        return True
    if hyp.kind == "whole":
        return False
    if hyp.kind == "cells":
        return all(f.convex_on(c) for c in shape.cell_complex(hyp.cells).cells)
    if hyp.kind == "sectors":
        return (f.cells is not None and f.conical_about is not None
                and np.allclose(f.conical_about, _center(shape), atol=CENTER_ATOL))
    raise ValueError(f"unknown hypothesis {hyp.kind!r}")


def _curved(shape: Shape) -> bool:
    return any(not isinstance(p, Simplex) for p in shape.body.pieces)


def hypothesis_field(hyp: Hypothesis, shape: Shape, seed: int) -> ScalarField:
    """Seeded field satisfying ``hyp`` on ``shape``.

    Globally convex families cycle with the seed.  Under a cell or sector
    hypothesis odd seeds give a piecewise field convex only on those cells.
    Shapes with curved pieces get smooth families: averages of kinked
    fields there converge too slowly to certify.
    """
    d = shape.body.ambient
    kinds = SMOOTH_CONVEX_KINDS if _curved(shape) else CONVEX_KINDS
    if hyp.kind == "whole":
        return random_convex(kinds[seed % len(kinds)], d, seed)
    base = kinds[(seed // 2) % len(kinds)]
    if seed % 2 == 0:
        return random_convex(base, d, seed)
    if hyp.kind == "sectors":
        return random_sector_field(_center(shape), getattr(shape, "R", 1.0), 3 + (seed // 2) % 4, seed, base)
    cc = shape.cell_complex(hyp.cells)
    if cc.simplices is not None:
        return random_piecewise_simplicial(cc.simplices, seed, base)
    return random_piecewise_conical(cc.apex, cc.facets, cc.cells, seed, base)


def function_kind(f: ScalarField) -> str:
    if f.kind == "piecewise":
        return f"piecewise({f.params.get('base', '')})"
    return f.kind


# ---------------------------------------------------------------------------
# checks


def run_entry(entry: CatalogEntry, shape: Shape, f: ScalarField, *, shape_name: str = "",
              seed: Optional[int] = None, tol: Tolerance = 1e-8, budget: int = DEFAULT_BUDGET,
              cache: Optional[AverageCache] = None) -> CheckRow:
    """Evaluate all expressions of ``entry`` on ``shape`` for ``f``."""
    view = entry.applies(shape)
    if view is None:
        raise catalog.CatalogError(f"entry {entry.id} does not apply to shape {shape.kind}")
    cache = cache if cache is not None else AverageCache()
    reports = [evaluate(b, f, tol, budget, cache) for b in entry.generate(view)]
    if entry.reducer == "min":
        pick = min(reports, key=lambda r: r.rhs.value)
    else:
        pick = min(reports, key=lambda r: r.gap + r.slack_tolerance)
    return CheckRow(entry.id, entry.anchor, shape_name or shape.kind, function_kind(f), seed,
                    pick.lhs.value, pick.rhs.value, pick.gap, pick.slack_tolerance,
                    all(r.holds for r in reports), hypothesis_met(entry.hypothesis, view, f),
                    pick.label, len(reports))


def _sort_key(row: CheckRow):
    return (row.entry_id, row.shape, -1 if row.seed is None else row.seed, row.function_kind)


@dataclass
class SweepResult:
    rows: list
    over_budget: int = 0

    @property
    def violations(self) -> list:
        return [r for r in self.rows if not r.holds]


def verify_shape(shape: Shape, seeds: Sequence[int], *, shape_name: str = "",
                 entries: Optional[Iterable[CatalogEntry]] = None,
                 field: Optional[Callable[[int], ScalarField]] = None,
                 tol: Tolerance = 1e-8, budget: int = DEFAULT_BUDGET,
                 accept_best: bool = False) -> SweepResult:
    """Every applicable entry on ``shape`` for every seed.

    Without ``field`` each entry gets :func:`hypothesis_field` fields;
    otherwise ``field(seed)`` is used for all entries and ``hypothesis_met``
    records whether the entry's hypothesis is satisfied.
    """
    entries = catalog.entries_for(shape) if entries is None else [
        e for e in entries if e.applies(shape) is not None]
    cache = AverageCache(accept_best=accept_best)
    memo: dict = {}
    rows = []
    for e in entries:
        view = e.applies(shape)
        for seed in seeds:
            if field is not None:
                key = ("given", seed)
                make = lambda: field(seed)
            else:
                key = (type(view).__name__, e.hypothesis, seed)
                make = lambda: hypothesis_field(e.hypothesis, view, seed)
            if key not in memo:
                memo[key] = make()
            rows.append(run_entry(e, shape, memo[key], shape_name=shape_name, seed=seed,
                                  tol=tol, budget=budget, cache=cache))
    rows.sort(key=_sort_key)
    return SweepResult(rows, cache.over_budget)


def sweep(seeds: Sequence[int] = range(100), shapes: Optional[dict] = None,
          tol: Tolerance = SWEEP_TOL, budget: int = DEFAULT_BUDGET,
          progress: Optional[Callable[[str, int], None]] = None) -> SweepResult:
    """All catalog entries on all canonical shapes with hypothesis-matched fields."""
    shapes = canonical_shapes() if shapes is None else shapes
    rows, over = [], 0
    for name, shape in shapes.items():
        res = verify_shape(shape, seeds, shape_name=name, tol=tol, budget=budget, accept_best=True)
        rows += res.rows
        over += res.over_budget
        if progress is not None:
            progress(name, len(res.rows))
    rows.sort(key=_sort_key)
    return SweepResult(rows, over)


def uncovered_entries(shapes: Optional[dict] = None) -> list[str]:
    shapes = canonical_shapes() if shapes is None else shapes
    covered = {e.id for s in shapes.values() for e in catalog.entries_for(s)}
    return sorted(e.id for e in catalog.ENTRIES if e.id not in covered)


# ---------------------------------------------------------------------------
# convergence studies


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    discrete: float
    limit: float
    difference: float


def _mix_value(b, f, tol, budget, cache) -> float:
    r = evaluate(b, f, tol, budget, cache)
    return r.lhs.value if b.direction != UPPER else r.rhs.value


def converge_annulus(a: Annulus, f: ScalarField, ns: Sequence[int] = CONVERGE_NS,
                     tol: Tolerance = 1e-10, budget: int = DEFAULT_BUDGET) -> list[ConvergenceRow]:
    """Inscribed-mesh barycenter lower bound against its two-circle limit."""
    cache = AverageCache()
    limit = _mix_value(catalog.get("usL").generate(a)[0], f, tol, budget, cache)
    rows = []
    for n in ns:
        v = _mix_value(catalog.annulus_discrete(a, n), f, tol, budget, cache)
        rows.append(ConvergenceRow(n, v, limit, abs(v - limit)))
    return rows


def converge_dicone(d: Dicone, f: ScalarField, ns: Sequence[int] = CONVERGE_NS,
                    tol: Tolerance = 1e-8, budget: int = DEFAULT_BUDGET) -> list[ConvergenceRow]:
    """Apex/umbrella upper bound on inscribed dipyramids against the dicone one."""
    cache = AverageCache()
    limit = _mix_value(catalog.get("dicone_O0").generate(d)[0], f, tol, budget, cache)
    rows = []
    for n in ns:
        mesh = dicone_limit_mesh(d, n)
        v = _mix_value(catalog.get("dip_O0").generate(mesh)[0], f, tol, budget, cache)
        rows.append(ConvergenceRow(n, v, limit, abs(v - limit)))
    return rows


def dicone_volume_ratios(d: Dicone, ns: Sequence[int] = CONVERGE_NS) -> list[ConvergenceRow]:
    """Inscribed dipyramid volume over dicone volume, tending to one."""
    V = d.volume()
    return [ConvergenceRow(n, dicone_limit_mesh(d, n).volume() / V, 1.0,
                           abs(dicone_limit_mesh(d, n).volume() / V - 1.0)) for n in ns]


__all__ = [
    "CheckRow", "SweepResult", "ConvergenceRow", "SWEEP_TOL", "canonical_shapes",
    "hypothesis_met", "hypothesis_field", "function_kind", "run_entry", "verify_shape",
    "sweep", "uncovered_entries", "converge_annulus", "converge_dicone", "dicone_volume_ratios",
]
