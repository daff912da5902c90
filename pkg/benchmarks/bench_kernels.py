"""Compare the compiled kernels with the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each row times one
kernel call on both backends, checks that the outputs agree and prints the
speedup.  Without the compiled extension only the fallback is timed.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from hhbounds.quadrature import rules
from hhbounds._kernels import _pykernels
from hhbounds.testfuncs import SimplicialPL, StarGauge, random_convex

try:
    from hhbounds._kernels import _ckernels
except ImportError:
    _ckernels = None


def _args(spec):
    return spec.code, spec.A, spec.b, spec.c, spec.center, spec.p


def _fields(d: int, rng):
    out = {k: random_convex(k, d, 7).native for k in
           ("max_affine", "psd_quadratic", "exp_affine", "norm_power")}
    cube = np.array([[s * (i == j) for j in range(d)] for i in range(d) for s in (1, -1)], float)
    facets = [cube[[2 * i + (m >> i & 1) for i in range(d)]] for m in range(2 ** d)]
    out["star_gauge"] = StarGauge(np.zeros(d), facets).native
    # simplices of the cross polytope: origin plus one facet each
    S = np.array([np.vstack([np.zeros(d), F]) for F in facets])
    out["simplicial_pl"] = SimplicialPL(S, rng.uniform(-1, 1, (len(S), d + 1))).native
    return out


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _row(name, py_fn, c_fn, repeat):
    t_py = _time(py_fn, repeat)
    if c_fn is None:
        print(f"{name:34s} {t_py * 1e3:9.3f} ms {'-':>9s} {'-':>8s}")
        return
    diff = float(np.max(np.abs(np.asarray(py_fn()) - np.asarray(c_fn()))))
    t_c = _time(c_fn, repeat)
    print(f"{name:34s} {t_py * 1e3:9.3f} ms {t_c * 1e3:9.3f} ms {t_py / t_c:7.1f}x  maxdiff {diff:.1e}")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--simplices", type=int, default=4096)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy':>12s} {'cython':>12s} {'speedup':>8s}")
    for d in (2, 3):
        X = rng.uniform(-1, 1, (args.points, d))
        V = np.ascontiguousarray(rng.uniform(-1, 1, (args.simplices, d + 1, d)))
        bary, w = rules.simplex_rule(d)
        bary, w = np.ascontiguousarray(bary), np.ascontiguousarray(w)
        for name, spec in _fields(d, rng).items():
            a = _args(spec)
            _row(f"eval_native d={d} {name}",
                 lambda: _pykernels.eval_native(*a, X),
                 None if _ckernels is None else (lambda: _ckernels.eval_native(*a, X)),
                 args.repeat)
            _row(f"simplex_means d={d} {name}",
                 lambda: _pykernels.simplex_means(*a, V, bary, w),
                 None if _ckernels is None else (lambda: _ckernels.simplex_means(*a, V, bary, w)),
                 args.repeat)
        table = np.ascontiguousarray(rules.kuhn_children(d))
        _row(f"subdivide d={d}",
             lambda: _pykernels.subdivide(V, table),
             None if _ckernels is None else (lambda: _ckernels.subdivide(V, table)),
             args.repeat)


if __name__ == "__main__":
    main()
