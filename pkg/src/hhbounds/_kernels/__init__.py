"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Set ``HHBOUNDS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("HHBOUNDS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

eval_native = _impl.eval_native
simplex_means = _impl.simplex_means
subdivide = _impl.subdivide
# only drives refinement decisions, so numpy is fast enough
piece_check = _pykernels.piece_check
KINKED = _pykernels.KINKED

MAX_AFFINE = _pykernels.MAX_AFFINE
QUADRATIC = _pykernels.QUADRATIC
EXP_AFFINE = _pykernels.EXP_AFFINE
NORM_POWER = _pykernels.NORM_POWER
STAR_GAUGE = _pykernels.STAR_GAUGE
SIMPLICIAL_PL = _pykernels.SIMPLICIAL_PL

__all__ = ["BACKEND", "eval_native", "simplex_means", "subdivide", "piece_check", "KINKED",
           "MAX_AFFINE", "QUADRATIC", "EXP_AFFINE", "NORM_POWER",
           "STAR_GAUGE", "SIMPLICIAL_PL"]
