"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_ckernels`` module exactly.  Field codes:

0  max-affine     ``max_j (A[j] . x + b[j])``
1  quadratic      ``x^T A x + b . x + c``
2  exp-affine     ``c * exp(A[0] . x + b[0])``
3  norm-power     ``c * |x - center| ** p``
4  star gauge     ``c * sum_i (M_f (x - center))_i`` on the facet cone f whose
                  coefficients are all nonnegative; ``A`` stacks the ``d x d``
                  blocks ``M_f``
5  simplicial PL  ``c * sum_i lam_i(x) b_{s,i}`` with barycentric
                  coordinates ``lam`` in the simplex s containing x; ``A``
                  stacks the ``d x d`` inverse edge matrices, ``center`` the
                  base vertices and ``b`` the nodal values
"""

import numpy as np

MAX_AFFINE, QUADRATIC, EXP_AFFINE, NORM_POWER, STAR_GAUGE, SIMPLICIAL_PL = 0, 1, 2, 3, 4, 5
CHUNK = 65536


def _chunked(fn, X):
    if X.shape[0] <= CHUNK:
        return fn(X)
    return np.concatenate([fn(X[i:i + CHUNK]) for i in range(0, X.shape[0], CHUNK)])


def _gauge_coef(A, center, Y):
    d = Y.shape[1]
    coef = np.einsum("fij,nj->nfi", A.reshape(-1, d, d), Y - center)
    return coef, np.argmax(coef.min(axis=2), axis=1)


def _gauge(A, c, center, X):
    def run(Y):
        coef, best = _gauge_coef(A, center, Y)
        return c * coef[np.arange(Y.shape[0]), best].sum(axis=1)
    return _chunked(run, X)


def _pl_coords(A, center, Y):
    d = Y.shape[1]
    lam = np.einsum("sij,nsj->nsi", A.reshape(-1, d, d), Y[:, None, :] - center.reshape(-1, d)[None])
    full = np.concatenate([1.0 - lam.sum(axis=2)[..., None], lam], axis=2)
    return full, np.argmax(full.min(axis=2), axis=1)


def _pl(A, b, c, center, X):
    vals = b.reshape(-1, X.shape[1] + 1)

    def run(Y):
        full, best = _pl_coords(A, center, Y)
        rows = np.arange(Y.shape[0])
        return c * np.einsum("ni,ni->n", full[rows, best], vals[best])
    return _chunked(run, X)


KINKED = (MAX_AFFINE, STAR_GAUGE, SIMPLICIAL_PL)
PIECE_EPS = 1e-12


def _shared(inside):
    """``inside`` is ``(E, m, P)``: does one piece hold all ``m`` points of a cell?"""
    return inside.all(axis=1).any(axis=1)


def piece_check(code, A, b, c, center, p, V):
    """Smoothness test for cells given by point sets ``V`` of shape ``(E, m, d)``.

    Returns ``(single, lo, hi)``: whether one smooth piece of the field holds
    all points of a cell, and lower and upper values of the field on the
    cell.  For max-affine fields ``lo`` is a lower bound over the convex hull
    of the points and ``hi`` its maximum there; other fields report the
    extremes over the points.  Fields outside ``KINKED`` are always single.
    """
    E, m, d = V.shape
    P = V.reshape(-1, d)
    if code == MAX_AFFINE:
        Z = (P @ A.T + b).reshape(E, m, -1)
        top = Z.max(axis=2)
        single = _shared(Z >= top[..., None] - PIECE_EPS * (1.0 + np.abs(top[..., None])))
        return single, Z.min(axis=1).max(axis=1), top.max(axis=1)
    if code == STAR_GAUGE:
        coef = _gauge_coef(A, center, P)[0].min(axis=2)
        scale = 1.0 + np.abs(P - center).max()
        inside = (coef >= -PIECE_EPS * scale).reshape(E, m, -1)
        # cones over one flat face carry the same linear functional
        w = A.reshape(-1, d, d).sum(axis=1)
        _, label = np.unique(np.round(w, 9), axis=0, return_inverse=True)
        label = label.reshape(-1)
        if label.max() + 1 < w.shape[0]:
            merged = np.zeros((E, m, label.max() + 1), dtype=bool)
            for f, l in enumerate(label):
                merged[:, :, l] |= inside[:, :, f]
            inside = merged
        single = _shared(inside)
    elif code == SIMPLICIAL_PL:
        full = _pl_coords(A, center, P)[0].min(axis=2)
        single = _shared((full >= -PIECE_EPS).reshape(E, m, -1))
    else:
        single = np.ones(E, dtype=bool)
    vals = eval_native(code, A, b, c, center, p, P).reshape(E, m)
    return single, vals.min(axis=1), vals.max(axis=1)


def eval_native(code, A, b, c, center, p, X):
    X = np.asarray(X, dtype=float)
    if code == MAX_AFFINE:
        return (X @ A.T + b).max(axis=1)
    if code == QUADRATIC:
        return np.einsum("ni,ij,nj->n", X, A, X) + X @ b + c
    if code == EXP_AFFINE:
        return c * np.exp(X @ A[0] + b[0])
    if code == NORM_POWER:
        return c * np.linalg.norm(X - center, axis=1) ** p
    if code == STAR_GAUGE:
        return _gauge(A, c, center, X)
    if code == SIMPLICIAL_PL:
        return _pl(A, b, c, center, X)
    raise ValueError(f"unknown native field code {code}")


def simplex_means(code, A, b, c, center, p, V, bary, w):
    """Rule estimate of the field's average on each simplex of ``V``.

    ``V`` has shape ``(E, k + 1, d)``; ``bary`` is ``(q, k + 1)``.
    """
    E, _, d = V.shape
    X = np.einsum("qi,eid->eqd", bary, V).reshape(-1, d)
    vals = eval_native(code, A, b, c, center, p, X).reshape(E, -1)
    return vals @ w


def subdivide(V, table):
    """Children of every simplex: ``(E, k+1, d)`` -> ``(E * nc, k+1, d)``."""
    E, kp1, d = V.shape
    return np.einsum("cai,eid->ecad", table, V).reshape(-1, kp1, d)
