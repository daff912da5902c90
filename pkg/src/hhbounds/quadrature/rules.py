"""Fixed cubature rules and refinement tables.

Simplex rules are stored in barycentric form ``(bary, weights)`` with
``bary`` of shape ``(q, k + 1)`` and weights normalized to sum to one, so
``weights @ f(bary @ vertices)`` is the rule's estimate of the *average*
of ``f`` over the simplex.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def _normalized(bary, w):
    bary = np.ascontiguousarray(bary, dtype=float)
    w = np.asarray(w, dtype=float)
    return bary, np.ascontiguousarray(w / w.sum())


def _orbit(coords):
    """All distinct permutations of a barycentric tuple, in sorted order."""
    return sorted(set(itertools.permutations(coords)))


@lru_cache(maxsize=None)
def gauss_legendre_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``n``-point Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def segment_rule(n: int = 3):
    t, w = gauss_legendre_unit(n)
    return _normalized(np.column_stack([1.0 - t, t]), w)


@lru_cache(maxsize=None)
def triangle_rule():
    """Radon's symmetric 7-point rule, exact for degree 5."""
    r = math.sqrt(15.0)
    a1, b1 = (6.0 - r) / 21.0, (9.0 + 2.0 * r) / 21.0
    a2, b2 = (6.0 + r) / 21.0, (9.0 - 2.0 * r) / 21.0
    w1, w2 = (155.0 - r) / 1200.0, (155.0 + r) / 1200.0
    pts = [(1 / 3, 1 / 3, 1 / 3)]
    wts = [9.0 / 40.0]
    for orbit, wt in ((_orbit((a1, a1, b1)), w1), (_orbit((a2, a2, b2)), w2)):
        pts += orbit
        wts += [wt] * len(orbit)
    return _normalized(pts, wts)


@lru_cache(maxsize=None)
def tetra_rule():
    """Keast's 11-point rule, exact for degree 4 (one negative weight)."""
    a = (1.0 + math.sqrt(5.0 / 14.0)) / 4.0
    b = (1.0 - math.sqrt(5.0 / 14.0)) / 4.0
    pts = [(0.25, 0.25, 0.25, 0.25)]
    wts = [-74.0 / 5625.0]
    o2 = _orbit((1 / 14, 1 / 14, 1 / 14, 11 / 14))
    pts += o2
    wts += [343.0 / 45000.0] * len(o2)
    o3 = _orbit((a, a, b, b))
    pts += o3
    wts += [56.0 / 2250.0] * len(o3)
    return _normalized(pts, wts)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def grundmann_moller_rule(k: int, s: int = 2):
    """Grundmann-Moller rule on a k-simplex, exact for degree ``2 s + 1``."""
    d = 2 * s + 1
    pts, wts = [], []
    for i in range(s + 1):
        denom = d + k - 2 * i
        wt = (-1) ** i * 2.0 ** (-2 * s) * denom**d / (
            math.factorial(i) * math.factorial(d + k - i))
        for beta in _compositions(s - i, k + 1):
            pts.append([(2 * bj + 1) / denom for bj in beta])
            wts.append(wt)
    return _normalized(pts, wts)


@lru_cache(maxsize=None)
def simplex_rule(k: int):
    """Default rule for a k-simplex: degree 5 (k <= 2), 4 (k = 3), 5 (k >= 4)."""
    if k == 0:
        return _normalized([[1.0]], [1.0])
    if k == 1:
        return segment_rule(3)
    if k == 2:
        return triangle_rule()
    if k == 3:
        return tetra_rule()
    return grundmann_moller_rule(k, 2)


@lru_cache(maxsize=None)
def kuhn_children(k: int) -> np.ndarray:
    """Barycentric vertex table of the ``2**k`` children of a k-simplex.

    Freudenthal/Kuhn subdivision: the doubled Kuhn simplex
    ``{2 >= y_1 >= ... >= y_k >= 0}`` is cut by the Kuhn triangulation of the
    unit cube grid.  Returns an array of shape ``(2**k, k + 1, k + 1)`` whose
    ``[c, a, :]`` row holds the barycentric coordinates of vertex ``a`` of
    child ``c``.  All children have equal volume.
    """
    if k == 0:
        return np.ones((1, 1, 1))
    children = []
    for corner in itertools.product((0, 1), repeat=k):
        for perm in itertools.permutations(range(k)):
            y = np.array(corner, dtype=float)
            verts = [y.copy()]
            for axis in perm:
                y[axis] += 1.0
                verts.append(y.copy())
            c = np.mean(verts, axis=0)
            inside = c[0] < 2.0 and c[-1] > 0.0 and np.all(np.diff(c) < 0.0)
            if inside:
                children.append(verts)
    table = np.empty((len(children), k + 1, k + 1))
    for ci, verts in enumerate(children):
        for a, y in enumerate(verts):
            half = y / 2.0
            lam = np.empty(k + 1)
            lam[0] = 1.0 - half[0]
            lam[1:k] = half[:-1] - half[1:]
            lam[k] = half[-1]
            table[ci, a] = lam
    assert table.shape[0] == 2**k
    return table


@lru_cache(maxsize=None)
def box_rule(m: int, n: int = 3):
    """Tensor Gauss-Legendre rule on [0, 1]^m; nodes ``(q, m)``, weights ``(q,)``."""
    t, w = gauss_legendre_unit(n)
    nodes = np.array(list(itertools.product(t, repeat=m)), dtype=float).reshape(-1, m)
    weights = np.array([math.prod(c) for c in itertools.product(w, repeat=m)])
    return np.ascontiguousarray(nodes), np.ascontiguousarray(weights / weights.sum())


@lru_cache(maxsize=None)
def box_children(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets of the ``2**m`` half-boxes as fractions of the parent box."""
    lo = np.array(list(itertools.product((0.0, 0.5), repeat=m))).reshape(-1, m)
    return lo, lo + 0.5
