"""Exact averages of polynomials over simplices.

Independent of every cubature rule: the polynomial is rewritten in
barycentric coordinates and each barycentric monomial is integrated with

    avg_simplex  l_0^a_0 ... l_k^a_k  =  k! * prod(a_i!) / (sum(a_i) + k)!
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from ..geometry import Simplex


@dataclass(frozen=True)
class Polynomial:
    """Sum of ``coef * x_0**e_0 * ... * x_{d-1}**e_{d-1}`` terms."""

    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def __post_init__(self):
        terms = tuple((float(c), tuple(int(e) for e in exps)) for c, exps in self.terms)
        if not terms:
            raise ValueError("polynomial needs at least one term")
        d = len(terms[0][1])
        for _, exps in terms:
            if len(exps) != d:
                raise ValueError("all exponent tuples must have the same length")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be nonnegative integers")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return len(self.terms[0][1])

    @property
    def degree(self) -> int:
        return max(sum(e) for _, e in self.terms)

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0])
        for c, exps in self.terms:
            out += c * np.prod(X ** np.asarray(exps), axis=1)
        return out

    @classmethod
    def random(cls, rng: np.random.Generator, d: int, degree: int,
               n_terms: int | None = None) -> "Polynomial":
        all_exps = [e for e in _multi_indices(d, degree)]
        if n_terms is None:
            n_terms = len(all_exps)
        pick = rng.choice(len(all_exps), size=min(n_terms, len(all_exps)), replace=False)
        return cls(tuple((float(rng.uniform(-1, 1)), all_exps[i]) for i in sorted(pick)))


def _multi_indices(d: int, max_degree: int) -> Iterable[tuple[int, ...]]:
    def rec(prefix, left, remaining):
        if left == 0:
            yield tuple(prefix)
            return
        for e in range(remaining + 1):
            yield from rec(prefix + [e], left - 1, remaining - e)

    yield from rec([], d, max_degree)


def _monomial_average(a: tuple[int, ...]) -> Fraction:
    k = len(a) - 1
    num = math.factorial(k) * math.prod(math.factorial(x) for x in a)
    return Fraction(num, math.factorial(sum(a) + k))


def exact_average_polynomial(p: Polynomial, s: Simplex) -> float:
    if p.dim != s.ambient:
        raise ValueError(f"polynomial in {p.dim} variables on a simplex in R^{s.ambient}")
    X = s.vertices
    kp1 = len(X)
    total = 0.0
    for coef, exps in p.terms:
        # coefficients of the term as a polynomial in the barycentric coordinates
        bary = {(0,) * kp1: coef}
        for j, e in enumerate(exps):
            for _ in range(e):
                nxt = defaultdict(float)
                for mono, c in bary.items():
                    for i in range(kp1):
                        xij = X[i][j]
                        if xij != 0.0:
                            m = list(mono)
                            m[i] += 1
                            nxt[tuple(m)] += c * xij
                bary = nxt
        total += math.fsum(c * float(_monomial_average(m)) for m, c in bary.items())
    return total
