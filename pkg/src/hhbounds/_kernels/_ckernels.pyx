# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, pow, sqrt

cnp.import_array()

DEF MAXD = 16


cdef inline double _eval(int code, const double* x, Py_ssize_t d,
                         const double[:, ::1] A, const double[::1] b,
                         double c, const double[::1] center, double p) noexcept nogil:
    cdef Py_ssize_t i, j, m
    cdef double acc, best, t
    if code == 0:
        m = A.shape[0]
        best = -1e308
        for j in range(m):
            acc = b[j]
            for i in range(d):
                acc = acc + A[j, i] * x[i]
            if acc > best:
                best = acc
        return best
    elif code == 1:
        acc = c
        for i in range(d):
            t = 0.0
            for j in range(d):
                t = t + A[i, j] * x[j]
            acc = acc + x[i] * (t + b[i])
        return acc
    elif code == 2:
        acc = b[0]
        for i in range(d):
            acc = acc + A[0, i] * x[i]
        return c * exp(acc)
    elif code == 3:
        acc = 0.0
        for i in range(d):
            t = x[i] - center[i]
            acc = acc + t * t
        return c * pow(sqrt(acc), p)
    elif code == 4:
        return c * _gauge(x, d, A, center)
    else:
        return c * _pl(x, d, A, b, center)


cdef inline double _gauge(const double* x, Py_ssize_t d, const double[:, ::1] A,
                          const double[::1] center) noexcept nogil:
    # facet cone with the largest minimal coefficient contains x
    cdef Py_ssize_t F = A.shape[0] // d, f, i, j
    cdef double best = -1e308, val = 0.0, lo, s, t
    for f in range(F):
        lo = 1e308
        s = 0.0
        for i in range(d):
            t = 0.0
            for j in range(d):
                t = t + A[f * d + i, j] * (x[j] - center[j])
            s = s + t
            if t < lo:
                lo = t
        if lo > best:
            best = lo
            val = s
    return val


cdef inline double _pl(const double* x, Py_ssize_t d, const double[:, ::1] A,
                       const double[::1] b, const double[::1] center) noexcept nogil:
    cdef Py_ssize_t S = A.shape[0] // d, s, i, j
    cdef double best = -1e308, val = 0.0, lo, lam, lam0, acc
    for s in range(S):
        lam0 = 1.0
        lo = 1e308
        acc = 0.0
        for i in range(d):
            lam = 0.0
            for j in range(d):
                lam = lam + A[s * d + i, j] * (x[j] - center[s * d + j])
            lam0 = lam0 - lam
            acc = acc + lam * b[s * (d + 1) + i + 1]
            if lam < lo:
                lo = lam
        if lam0 < lo:
            lo = lam0
        if lo > best:
            best = lo
            val = acc + lam0 * b[s * (d + 1)]
    return val


def eval_native(int code, const double[:, ::1] A, const double[::1] b, double c,
                const double[::1] center, double p, X):
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], r
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    if code < 0 or code > 5:
        raise ValueError(f"unknown native field code {code}")
    with nogil:
        for r in range(n):
            ov[r] = _eval(code, &Xv[r, 0], d, A, b, c, center, p)
    return out


def simplex_means(int code, const double[:, ::1] A, const double[::1] b, double c,
                  const double[::1] center, double p, V, const double[:, ::1] bary,
                  const double[::1] w):
    cdef const double[:, :, ::1] Vv = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t E = Vv.shape[0], kp1 = Vv.shape[1], d = Vv.shape[2]
    cdef Py_ssize_t q = bary.shape[0], e, s, i, j
    cdef double x[MAXD]
    cdef double acc, lam
    if d > MAXD:
        raise ValueError("ambient dimension too large for the compiled kernel")
    if code < 0 or code > 5:
        raise ValueError(f"unknown native field code {code}")
    out = np.empty(E, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for e in range(E):
            acc = 0.0
            for s in range(q):
                for j in range(d):
                    x[j] = 0.0
                for i in range(kp1):
                    lam = bary[s, i]
                    for j in range(d):
                        x[j] = x[j] + lam * Vv[e, i, j]
                acc = acc + w[s] * _eval(code, x, d, A, b, c, center, p)
            ov[e] = acc
    return out


def subdivide(V, const double[:, :, ::1] table):
    cdef const double[:, :, ::1] Vv = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t E = Vv.shape[0], kp1 = Vv.shape[1], d = Vv.shape[2]
    cdef Py_ssize_t nc = table.shape[0], e, ch, a, i, j
    out = np.empty((E * nc, kp1, d), dtype=np.float64)
    cdef double[:, :, ::1] ov = out
    cdef double acc
    with nogil:
        for e in range(E):
            for ch in range(nc):
                for a in range(kp1):
                    for j in range(d):
                        acc = 0.0
                        for i in range(kp1):
                            acc = acc + table[ch, a, i] * Vv[e, i, j]
                        ov[e * nc + ch, a, j] = acc
    return out
