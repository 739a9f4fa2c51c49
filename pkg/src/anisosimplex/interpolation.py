"""Lagrange (P1, P2) and nodal Crouzeix-Raviart interpolation on simplices.

Interpolants are :class:`SimplexPolynomial` objects: homogeneous polynomials
of degree ``k`` in the ``d+1`` barycentric coordinates. Because the
barycentric coordinates sum to one, this basis spans all of P^k, and
derivatives and integrals are evaluated exactly:

* d/dx_j lambda^a = sum_i a_i lambda^(a - e_i) * grad(lambda_i)_j
* integral over T of lambda^a = d! |T| a! / (|a| + d)!
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from math import comb

import numpy as np

from .fields import ScalarField
from .geometry import Simplex, as_simplex, measure

LAGRANGE = "lagrange"
CROUZEIX_RAVIART = "cr"


@dataclass(frozen=True)
class OperatorSpec:
    kind: str = LAGRANGE
    k: int = 1

    def __post_init__(self):
        kind = self.kind.lower()
        if kind in ("crouzeix-raviart", "crouzeixraviart", "crouzeix_raviart"):
            kind = CROUZEIX_RAVIART
        if kind not in (LAGRANGE, CROUZEIX_RAVIART):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == LAGRANGE and self.k not in (1, 2):
            raise ValueError("Lagrange interpolation is provided for k = 1, 2")
        if kind == CROUZEIX_RAVIART and self.k != 1:
            raise ValueError("Crouzeix-Raviart interpolation is affine (k = 1)")


def barycentric_gradients(s) -> np.ndarray:
    """Row i is grad(lambda_i); constant over the simplex."""
    s = as_simplex(s)
    measure(s)
    inv = np.linalg.inv(s.edge_matrix())
    return np.vstack([-inv.sum(axis=0), inv])


def barycentric(s, p) -> np.ndarray:
    """Barycentric coordinates of one point ``(d,)`` or many points ``(n, d)``."""
    s = as_simplex(s)
    pts = np.asarray(p, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, s.dim)
    measure(s)
    tail = np.linalg.solve(s.edge_matrix(), (pts - s.vertices[0]).T).T
    lam = np.column_stack([1.0 - tail.sum(axis=1), tail])
    return lam[0] if single else lam


def homogeneous_exponents(nvars: int, degree: int) -> list:
    """Exponent tuples of total ``degree`` in ``nvars`` variables, descending."""
    out = [
        a for a in itertools.product(range(degree + 1), repeat=nvars) if sum(a) == degree
    ]
    return sorted(out, reverse=True)


def barycentric_moment(expo, dim: int, vol: float) -> float:
    """Integral of prod lambda_i^{a_i} over a simplex of measure ``vol``."""
    num = math.factorial(dim) * math.prod(math.factorial(a) for a in expo)
    return vol * num / math.factorial(sum(expo) + dim)


class SimplexPolynomial(ScalarField):
    """Polynomial on a fixed simplex in the barycentric monomial basis."""

    def __init__(self, simplex, degree: int, coefficients=None, *, terms=None):
        self.simplex = as_simplex(simplex)
        self.dim = self.simplex.dim
        self.degree = int(degree)
        self.exponents = homogeneous_exponents(self.dim + 1, self.degree)
        if terms is not None:
            coeffs = np.array([terms.get(a, 0.0) for a in self.exponents], dtype=float)
        else:
            coeffs = np.asarray(coefficients, dtype=float)
        if coeffs.shape != (comb(self.degree + self.dim, self.dim),):
            raise ValueError(
                f"expected {comb(self.degree + self.dim, self.dim)} coefficients, got {coeffs.shape}"
            )
        self.coefficients = coeffs
        self.poly_degree = self.degree
        self._grads = None

    @property
    def terms(self) -> dict:
        return {a: c for a, c in zip(self.exponents, self.coefficients) if c != 0.0}

    def _gradients(self):
        if self._grads is None:
            self._grads = barycentric_gradients(self.simplex)
        return self._grads

    def derivative(self, beta) -> "SimplexPolynomial":
        """Exact Cartesian partial derivative, again in barycentric form."""
        grads = self._gradients()
        terms = dict(self.terms)
        degree = self.degree
        for j, b in enumerate(beta):
            for _ in range(b):
                if degree == 0:
                    return SimplexPolynomial(self.simplex, 0, [0.0])
                new = defaultdict(float)
                for a, c in terms.items():
                    for i, ai in enumerate(a):
                        if ai and grads[i, j] != 0.0:
                            lowered = a[:i] + (ai - 1,) + a[i + 1 :]
                            new[lowered] += c * ai * grads[i, j]
                terms = dict(new)
                degree -= 1
        return SimplexPolynomial(self.simplex, degree, terms=terms)

    def evaluate_barycentric(self, lam) -> np.ndarray:
        lam = np.atleast_2d(lam)
        out = np.zeros(lam.shape[0])
        for a, c in zip(self.exponents, self.coefficients):
            if c != 0.0:
                out += c * np.prod(lam**np.array(a), axis=1)
        return out

    def partial(self, beta, x) -> np.ndarray:
        lam = barycentric(self.simplex, np.asarray(x, float).reshape(-1, self.dim))
        if sum(beta) == 0:
            return self.evaluate_barycentric(lam)
        return self.derivative(beta).evaluate_barycentric(lam)

    def integrate(self) -> float:
        vol = measure(self.simplex)
        return float(
            sum(c * barycentric_moment(a, self.dim, vol) for a, c in self.terms.items())
        )

    def __mul__(self, other: "SimplexPolynomial") -> "SimplexPolynomial":
        if not isinstance(other, SimplexPolynomial):
            return NotImplemented
        prod = defaultdict(float)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                prod[tuple(x + y for x, y in zip(a, b))] += ca * cb
        return SimplexPolynomial(self.simplex, self.degree + other.degree, terms=dict(prod))

    def __repr__(self):
        return f"SimplexPolynomial(degree={self.degree}, terms={self.terms!r})"


def interpolation_nodes(s, spec: OperatorSpec) -> np.ndarray:
    """Lagrange: vertices (+ edge midpoints for k=2). CR: facet barycenters.

    Edges and facets are enumerated as sorted vertex tuples.
    """
    s = as_simplex(s)
    v = s.vertices
    if spec.kind == CROUZEIX_RAVIART:
        facets = itertools.combinations(range(s.dim + 1), s.dim)
        return np.array([v[list(f)].mean(axis=0) for f in facets])
    nodes = [x for x in v]
    if spec.k == 2:
        nodes += [0.5 * (v[i] + v[j]) for i, j in itertools.combinations(range(s.dim + 1), 2)]
    return np.array(nodes)


def _unit(nvars, *idx):
    a = [0] * nvars
    for i in idx:
        a[i] += 1
    return tuple(a)


def interpolate(field, s, spec: OperatorSpec = OperatorSpec()) -> SimplexPolynomial:
    """Apply the interpolation operator to ``field`` on simplex ``s``.

    ``field`` is any callable on an ``(n, dim)`` array (a ScalarField works).
    The nodal basis functions are known in closed barycentric form, so the
    coefficients are linear combinations of nodal values:

    * P1:  lambda_i
    * P2:  lambda_i (2 lambda_i - 1) at vertices, 4 lambda_i lambda_j at edges
    * CR:  1 - d lambda_i at the barycenter of the facet opposite x_i
    """
    s = as_simplex(s)
    measure(s)
    n = s.dim + 1
    nodes = interpolation_nodes(s, spec)
    vals = np.asarray(field(nodes), dtype=float).reshape(-1)
    terms = {}
    if spec.kind == CROUZEIX_RAVIART:
        # facet list from interpolation_nodes is combinations(range(n), d); the
        # facet omitting vertex i sits at position n - 1 - i
        opp = np.array([vals[n - 1 - i] for i in range(n)])
        total = opp.sum()
        for j in range(n):
            terms[_unit(n, j)] = total - s.dim * opp[j]
        return SimplexPolynomial(s, 1, terms=terms)
    if spec.k == 1:
        for i in range(n):
            terms[_unit(n, i)] = vals[i]
        return SimplexPolynomial(s, 1, terms=terms)
    for i in range(n):
        terms[_unit(n, i, i)] = vals[i]
    for e, (i, j) in enumerate(itertools.combinations(range(n), 2)):
        terms[_unit(n, i, j)] = 4.0 * vals[n + e] - vals[i] - vals[j]
    return SimplexPolynomial(s, 2, terms=terms)
