"""Conical-product (collapsed Gauss-Jacobi) quadrature on triangles and tetrahedra."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import UnsupportedDegreeError
from .geometry import as_simplex, measure

MAX_DEGREE = 20
REFERENCE_MEASURE = {2: 0.5, 3: 1.0 / 6.0}


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes in barycentric coordinates, weights on the reference simplex."""

    dim: int
    nodes: np.ndarray  # (n, dim + 1)
    weights: np.ndarray  # (n,), sum to the reference measure
    exactness_degree: int

    def points(self, simplex) -> np.ndarray:
        return self.nodes @ as_simplex(simplex).vertices

    def scaled_weights(self, simplex) -> np.ndarray:
        return self.weights * (measure(simplex) / REFERENCE_MEASURE[self.dim])

    def integrate(self, f, simplex) -> float:
        s = as_simplex(simplex)
        vals = np.asarray(f(self.points(s)), dtype=float)
        return float(self.scaled_weights(s) @ vals)


def _gauss_jacobi01(n: int, a: int):
    """n-point rule for int_0^1 g(t) (1 - t)^a dt."""
    x, w = roots_jacobi(n, a, 0)
    return 0.5 * (1.0 + x), w / 2.0 ** (a + 1)


@lru_cache(maxsize=None)
def make_rule(dim: int, exactness_degree: int) -> QuadratureRule:
    """Collapsed tensor rule exact for total degree ``exactness_degree``.

    The triangle is the image of the unit square under
    (u, v) -> (u, (1-u) v); the tetrahedron uses
    (u, v, w) -> (u, (1-u) v, (1-u)(1-v) w). The Jacobians are absorbed
    into Gauss-Jacobi weights, so ceil((degree+1)/2) points per direction
    suffice.
    """
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    if not 1 <= exactness_degree <= MAX_DEGREE:
        raise UnsupportedDegreeError(
            f"exactness degree must be in [1, {MAX_DEGREE}], got {exactness_degree}"
        )
    n = math.ceil((exactness_degree + 1) / 2)
    if dim == 2:
        u, wu = _gauss_jacobi01(n, 1)
        v, wv = _gauss_jacobi01(n, 0)
        U, V = np.meshgrid(u, v, indexing="ij")
        x = U.ravel()
        y = ((1.0 - U) * V).ravel()
        weights = np.outer(wu, wv).ravel()
        nodes = np.column_stack([1.0 - x - y, x, y])
    else:
        u, wu = _gauss_jacobi01(n, 2)
        v, wv = _gauss_jacobi01(n, 1)
        w, ww = _gauss_jacobi01(n, 0)
        U, V, W = np.meshgrid(u, v, w, indexing="ij")
        x = U.ravel()
        y = ((1.0 - U) * V).ravel()
        z = ((1.0 - U) * (1.0 - V) * W).ravel()
        weights = np.einsum("i,j,k->ijk", wu, wv, ww).ravel()
        nodes = np.column_stack([1.0 - x - y - z, x, y, z])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(dim, nodes, weights, exactness_degree)


def monomial_moment(expo) -> float:
    """Exact integral of x^a y^b (z^c) over the reference simplex."""
    d = len(expo)
    return math.prod(math.factorial(a) for a in expo) / math.factorial(sum(expo) + d)
