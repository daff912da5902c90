"""Hermite-Hadamard type bounds for averages of convex functions.

Subpackages and modules
-----------------------
geometry
    Simplices, disks, balls and other integration regions.
quadrature
    Adaptive and exact averages over regions.
simplex_bounds
    Partition and chain bounds on a single simplex.
shapes
    Composite shapes built from simplices and curved pieces.
catalog
    Named inequalities with their hypotheses.
testfuncs
    Seeded convex and piecewise-convex test fields.
harness
    Verification sweeps and convergence tables.
"""

from importlib.metadata import PackageNotFoundError, version

from ._kernels import BACKEND
from .catalog import ENTRIES, CatalogEntry, entries_for, get, manifest
from .harness import canonical_shapes, sweep, verify_shape
from .quadrature import QuadResult, average, average_weighted, exact_average_polynomial
from .shapes import Shape, coerce, shape_from_dict
from .testfuncs import ScalarField, field_from_spec, random_convex

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "BACKEND", "ENTRIES", "CatalogEntry", "entries_for", "get", "manifest",
    "canonical_shapes", "sweep", "verify_shape", "QuadResult", "average", "average_weighted",
    "exact_average_polynomial", "Shape", "coerce", "shape_from_dict", "ScalarField",
    "field_from_spec", "random_convex", "__version__",
]
