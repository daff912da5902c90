import numpy as np
import pytest

from hhbounds import _kernels
from hhbounds._kernels import _pykernels
from hhbounds.quadrature import rules
from hhbounds.testfuncs import SimplicialPL, StarGauge, random_convex

_ckernels = pytest.importorskip("hhbounds._kernels._ckernels")


def _fields(d, rng):
    out = [random_convex(k, d, 3).native for k in
           ("max_affine", "psd_quadratic", "exp_affine", "norm_power")]
    cross = np.array([[s * (i == j) for j in range(d)] for i in range(d) for s in (1, -1)], float)
    facets = [cross[[2 * i + (m >> i & 1) for i in range(d)]] for m in range(2 ** d)]
    out.append(StarGauge(np.zeros(d), facets, 1.3).native)
    S = np.array([np.vstack([np.zeros(d), F]) for F in facets])
    out.append(SimplicialPL(S, rng.uniform(-1, 1, (len(S), d + 1))).native)
    return out


def _args(n):
    return n.code, n.A, n.b, n.c, n.center, n.p


@pytest.mark.parametrize("d", [1, 2, 3])
def test_backends_agree(d):
    rng = np.random.default_rng(d)
    X = rng.uniform(-1, 1, (500, d))
    V = np.ascontiguousarray(rng.uniform(-1, 1, (40, d + 1, d)))
    bary, w = rules.simplex_rule(d)
    for spec in _fields(d, rng):
        a = _args(spec)
        assert np.allclose(_ckernels.eval_native(*a, X), _pykernels.eval_native(*a, X),
                           rtol=1e-13, atol=1e-13)
        assert np.allclose(_ckernels.simplex_means(*a, V, bary, w),
                           _pykernels.simplex_means(*a, V, bary, w), rtol=1e-13, atol=1e-13)
    table = np.ascontiguousarray(rules.kuhn_children(d))
    assert np.array_equal(_ckernels.subdivide(V, table), _pykernels.subdivide(V, table))


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")


def test_kuhn_children_partition_volume():
    for k in (1, 2, 3, 4):
        V = np.vstack([np.zeros(k), np.eye(k)])[None]
        kids = _pykernels.subdivide(V, rules.kuhn_children(k))
        vols = [abs(np.linalg.det(c[1:] - c[0])) for c in kids]
        assert len(kids) == 2 ** k
        assert np.allclose(vols, vols[0])
        assert sum(vols) == pytest.approx(abs(np.linalg.det(V[0, 1:] - V[0, 0])))


def test_gauge_is_one_on_facets():
    d = 2
    facets = [np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([[0.0, 1.0], [-1.0, 0.0]]),
              np.array([[-1.0, 0.0], [0.0, -1.0]]), np.array([[0.0, -1.0], [1.0, 0.0]])]
    g = StarGauge(np.zeros(d), facets)
    pts = np.array([[0.5, 0.5], [-0.2, 0.8], [0.0, -1.0], [2.0, 0.0]])
    assert np.allclose(g(pts), np.abs(pts).sum(axis=1))


def test_piece_check_flags_kinks():
    f = random_convex("max_affine", 2, 0).native
    V = np.array([[[0.0, 0.0], [1e-9, 0.0], [0.0, 1e-9]],
                  [[-5.0, -5.0], [5.0, -5.0], [0.0, 5.0]]])
    single, lo, hi = _pykernels.piece_check(*_args(f), V)
    assert single.shape == (2,)
    assert not single[1]
    # lo bounds the field from below on the whole hull, hi is its maximum there
    lam = np.random.default_rng(0).dirichlet(np.ones(3), 20_000)
    for e in range(2):
        vals = _pykernels.eval_native(*_args(f), lam @ V[e])
        assert lo[e] <= vals.min() + 1e-12
        assert hi[e] >= vals.max() - 1e-12


def test_pure_python_fallback_end_to_end():
    import json
    import os
    import subprocess
    import sys
    code = ("import json; from hhbounds import harness, _kernels;"
            "sh = harness.canonical_shapes()['fan'];"
            "res = harness.verify_shape(sh, range(3), tol=harness.SWEEP_TOL);"
            "print(_kernels.BACKEND, json.dumps([r.rhs for r in res.rows]))")
    outs = {}
    for flag in ("1", "0"):
        env = {**os.environ, "HHBOUNDS_PURE_PYTHON": flag}
        proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                              text=True, check=True)
        backend, _, rows = proc.stdout.partition(" ")
        outs[backend] = json.loads(rows)
    assert set(outs) == {"python", "cython"}
    assert np.allclose(outs["python"], outs["cython"], rtol=1e-12, atol=1e-12)
