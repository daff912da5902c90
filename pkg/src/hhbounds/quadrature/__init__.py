"""Averages of scalar fields over regions, plus an exact polynomial oracle."""

from __future__ import annotations

import numpy as np

from ..geometry import ConePatch, GeometryError, as_region
from .engine import (
    DEFAULT_BUDGET, BudgetExceeded, EvaluationError, QuadratureError, QuadResult,
    adaptive_average,
)
from .oracle import Polynomial, exact_average_polynomial

AXIS_TOL = 1e-9


def average(f, r, tol: float = 1e-8, budget: int = DEFAULT_BUDGET) -> QuadResult:
    """Average of ``f`` over region ``r`` with ``error_estimate <= tol``.

    Raises :class:`EvaluationError` on a non-finite integrand value and
    :class:`BudgetExceeded` (carrying the best estimate) when ``budget``
    point evaluations do not suffice.
    """
    return adaptive_average(f, r, tol, budget)


def _on_line(p, origin, direction):
    w = np.asarray(p) - origin
    return np.linalg.norm(w - (w @ direction) * direction) <= AXIS_TOL * max(1.0, np.linalg.norm(w))


def average_weighted(f, r, axis, tol: float = 1e-8,
                     budget: int = DEFAULT_BUDGET) -> QuadResult:
    """Average of ``f(x) / dist(x, axis)`` over a union of cone patches.

    ``axis`` is ``(point, direction)``.  Every piece must be a cone patch
    whose apex and base center lie on the axis; the polar Jacobian cancels
    the distance weight, so no singular evaluation takes place.
    """
    r = as_region(r)
    origin, direction = (np.asarray(a, dtype=float) for a in axis)
    direction = direction / np.linalg.norm(direction)
    for piece in r.pieces:
        if not isinstance(piece, ConePatch):
            raise GeometryError(f"weighted average needs cone patches, got {type(piece).__name__}")
        if not (_on_line(piece.apex, origin, direction) and _on_line(piece.center, origin, direction)):
            raise GeometryError("cone patch is not centred on the given axis")
    return adaptive_average(f, r, tol, budget, inverse_axis_weight=True)


__all__ = [
    "QuadResult", "Polynomial", "average", "average_weighted", "exact_average_polynomial",
    "QuadratureError", "EvaluationError", "BudgetExceeded", "DEFAULT_BUDGET",
]
