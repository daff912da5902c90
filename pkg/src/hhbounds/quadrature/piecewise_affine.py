"""Exact averages of piecewise-affine fields over simplices.

For a convex max-affine field a simplex is cut along hyperplanes
``l_a = l_b`` until one affine piece is active at every vertex of each cell;
by convexity the field then equals that piece on the whole cell.  Gauge and
simplicial PL fields list their polyhedral pieces, and the simplex is cut to
each piece.  Every cell is integrated exactly by its centroid value.  Both
sides of a cut are triangulated by pulling from a vertex.
"""

from __future__ import annotations

import math

import numpy as np

from .._kernels import SIMPLICIAL_PL, STAR_GAUGE
from ..geometry import simplex_volume

ACTIVE_RTOL = 1e-12


def _split(g, eps):
    pos = [i for i, v in enumerate(g) if v > eps]
    neg = [i for i, v in enumerate(g) if v < -eps]
    zero = [i for i, v in enumerate(g) if abs(v) <= eps]
    return pos, neg, zero


def _drop(seq, i):
    return seq[:i] + seq[i + 1:]


# Vertices on the hyperplane are peeled off first: the cut of a simplex is
# the join of such a vertex with the cut of its opposite facet.  Without them
# the facets of a cut polytope are the cuts of distinct simplex facets, so
# pulling from a vertex never visits a face twice.


def _section(pts, g, eps):
    """Triangulation of ``conv(pts) ∩ {g = 0}`` by simplices of ``len(pts) - 1`` points.

    Returns ``[]`` when the intersection has lower dimension.
    """
    pos, neg, zero = _split(g, eps)
    if zero:
        if len(zero) == len(pts):
            return []
        z = zero[0]
        return [[pts[z]] + s for s in _section(_drop(pts, z), _drop(g, z), eps)]
    if len(pts) == 1:
        return [[]]
    if not pos or not neg:
        return []
    i, j = pos[0], neg[0]
    t = g[i] / (g[i] - g[j])
    e = pts[i] + t * (pts[j] - pts[i])
    if len(pts) == 2:
        return [[e]]
    out = [[e] + s for s in _section(_drop(pts, i), _drop(g, i), eps)]
    out += [[e] + s for s in _section(_drop(pts, j), _drop(g, j), eps)]
    return out


def _positive(pts, g, eps):
    """Triangulation of ``conv(pts) ∩ {g >= 0}`` by simplices of ``len(pts)`` points."""
    pos, neg, zero = _split(g, eps)
    if not neg:
        return [pts]
    if not pos:
        return []
    if zero:
        z = zero[0]
        return [[pts[z]] + s for s in _positive(_drop(pts, z), _drop(g, z), eps)]
    i = pos[0]
    apex = pts[i]
    out = [[apex] + s for s in _section(pts, g, eps)]
    out += [[apex] + s for s in _positive(_drop(pts, i), _drop(g, i), eps)]
    return out


def _cut_pair(M, active, eps):
    """Pieces ``(a, b)`` whose difference changes sign across the vertices."""
    best, pair = eps, None
    live = np.flatnonzero(active.any(axis=0))
    for ia, a in enumerate(live):
        for b in live[ia + 1:]:
            g = M[:, a] - M[:, b]
            score = min(g.max(), -g.min())
            if score > best:
                best, pair = score, (a, b)
    return pair


def max_affine_average(A: np.ndarray, b: np.ndarray, V: np.ndarray) -> float:
    """Average of ``max_j (A[j] . x + b[j])`` over the simplex with vertex rows ``V``."""
    V = np.asarray(V, dtype=float)
    total_vol = simplex_volume(V)
    if V.shape[0] == 1:
        return float((A @ V[0] + b).max())
    acc = []
    stack = [V]
    while stack:
        S = stack.pop()
        M = S @ A.T + b
        top = M.max(axis=1)
        scale = 1.0 + float(np.abs(M).max())
        eps = ACTIVE_RTOL * scale
        active = M >= top[:, None] - eps
        common = np.flatnonzero(active.all(axis=0))
        pair = None if common.size else _cut_pair(M, active, eps)
        if pair is None:
            # one piece is active everywhere, up to round-off
            j = common[0] if common.size else int(np.argmax((M - top[:, None]).min(axis=0)))
            vol = simplex_volume(S)
            if vol > 0.0:
                acc.append(vol * float(A[j] @ S.mean(axis=0) + b[j]))
            continue
        a, c = pair
        g = list(M[:, a] - M[:, c])
        pts = list(S)
        for side in (g, [-v for v in g]):
            for cell in _positive(pts, side, eps):
                C = np.array(cell)
                if simplex_volume(C) > 0.0:
                    stack.append(C)
    return math.fsum(acc) / total_vol


COVER_RTOL = 1e-9


def affine_pieces(code, A, b, c, center, d: int) -> list:
    """Polyhedral pieces ``(H, h0, g, g0)`` of a gauge or simplicial PL field.

    On ``{x : H x + h0 >= 0}`` the field equals ``g . x + g0``.
    """
    out = []
    if code == STAR_GAUGE:
        for M in A.reshape(-1, d, d):
            g = c * M.sum(axis=0)
            out.append((M, -M @ center, g, -float(g @ center)))
    elif code == SIMPLICIAL_PL:
        vals = b.reshape(-1, d + 1)
        for T, v0, y in zip(A.reshape(-1, d, d), center.reshape(-1, d), vals):
            H = np.vstack([-T.sum(axis=0), T])
            h0 = -H @ v0
            h0[0] += 1.0
            g = (y[1:] - y[0]) @ T
            out.append((H, h0, c * g, c * float(y[0] - g @ v0)))
    else:
        raise ValueError(f"field code {code} has no polyhedral pieces")
    return out


def pieces_average(pieces, V: np.ndarray):
    """Exact average over the simplex ``V`` of a field affine on each piece.

    Returns ``None`` when the pieces do not cover the simplex.
    """
    V = np.asarray(V, dtype=float)
    total_vol = simplex_volume(V)
    if total_vol == 0.0:
        return None
    acc, covered = [], []
    for H, h0, g, g0 in pieces:
        G = V @ H.T + h0
        eps = ACTIVE_RTOL * (1.0 + float(np.abs(G).max()))
        if (G < -eps).all(axis=0).any():
            continue
        cells = [V]
        for k in np.flatnonzero((G < -eps).any(axis=0)):
            nxt = []
            for C in cells:
                for cell in _positive(list(C), list(C @ H[k] + h0[k]), eps):
                    D = np.array(cell)
                    if simplex_volume(D) > 0.0:
                        nxt.append(D)
            cells = nxt
            if not cells:
                break
        for C in cells:
            vol = simplex_volume(C)
            covered.append(vol)
            acc.append(vol * (float(g @ C.mean(axis=0)) + g0))
    if abs(math.fsum(covered) - total_vol) > COVER_RTOL * total_vol:
        return None
    return math.fsum(acc) / total_vol
