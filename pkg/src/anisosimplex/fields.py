"""Scalar fields that can be differentiated to a known order.

Every field evaluates on an ``(n, dim)`` array of points and returns an
``(n,)`` array. ``partial(beta, x)`` returns the mixed partial derivative
for the multi-index ``beta``. ``max_order`` is the highest derivative order
the field can supply (``None`` means unlimited); ``poly_degree`` is the
total polynomial degree for polynomial fields and ``None`` otherwise.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable, Optional

import numpy as np

from .errors import InsufficientSmoothnessError


def multi_indices(dim: int, order: int) -> list:
    """All multi-indices of ``dim`` entries with total ``order``, lexicographically descending."""
    out = [
        beta
        for beta in itertools.product(range(order + 1), repeat=dim)
        if sum(beta) == order
    ]
    return sorted(out, reverse=True)


def _points(x, dim):
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, dim)
    return pts


class ScalarField:
    dim: int = 0
    max_order: Optional[int] = None
    poly_degree: Optional[int] = None

    def partial(self, beta, x) -> np.ndarray:
        raise NotImplementedError

    def require_order(self, order: int) -> None:
        if self.max_order is not None and order > self.max_order:
            raise InsufficientSmoothnessError(
                f"field supplies derivatives up to order {self.max_order}, {order} requested"
            )

    def value(self, x) -> np.ndarray:
        return self.partial((0,) * self.dim, x)

    def __call__(self, x) -> np.ndarray:
        return self.value(x)

    def gradient(self, x) -> np.ndarray:
        pts = _points(x, self.dim)
        cols = []
        for j in range(self.dim):
            beta = [0] * self.dim
            beta[j] = 1
            cols.append(self.partial(tuple(beta), pts))
        return np.stack(cols, axis=-1)

    def hessian(self, x) -> np.ndarray:
        pts = _points(x, self.dim)
        out = np.empty((pts.shape[0], self.dim, self.dim))
        for i in range(self.dim):
            for j in range(i, self.dim):
                beta = [0] * self.dim
                beta[i] += 1
                beta[j] += 1
                out[:, i, j] = out[:, j, i] = self.partial(tuple(beta), pts)
        return out

    def directional(self, vectors, x) -> np.ndarray:
        """D^n f(x)[v_1, ..., v_n] for the rows ``v_k`` of ``vectors``."""
        vectors = np.asarray(vectors, dtype=float).reshape(-1, self.dim)
        n = vectors.shape[0]
        self.require_order(n)
        pts = _points(x, self.dim)
        weights: Counter = Counter()
        for seq in itertools.product(range(self.dim), repeat=n):
            w = 1.0
            for k, j in enumerate(seq):
                w *= vectors[k, j]
            if w == 0.0:
                continue
            beta = [0] * self.dim
            for j in seq:
                beta[j] += 1
            weights[tuple(beta)] += w
        total = np.zeros(pts.shape[0])
        for beta, w in weights.items():
            if w != 0.0:
                total += w * self.partial(beta, pts)
        return total

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return DifferenceField(self, other)


class PolynomialField(ScalarField):
    """Polynomial in Cartesian coordinates: ``{exponent tuple: coefficient}``.

    >>> f = PolynomialField({(2, 0): 1.0, (0, 2): 1.0})  # x^2 + y^2
    >>> float(f.value([1.0, 2.0])[0])
    5.0
    """

    def __init__(self, terms: dict, dim: Optional[int] = None):
        terms = {tuple(int(e) for e in k): float(c) for k, c in terms.items() if c != 0.0}
        if dim is None:
            if not terms:
                raise ValueError("dim is required for the zero polynomial")
            dim = len(next(iter(terms)))
        if any(len(k) != dim for k in terms):
            raise ValueError("inconsistent exponent lengths")
        self.dim = dim
        self.terms = terms
        self.poly_degree = max((sum(k) for k in terms), default=0)

    def partial(self, beta, x) -> np.ndarray:
        pts = _points(x, self.dim)
        out = np.zeros(pts.shape[0])
        for expo, coef in self.terms.items():
            if any(b > e for b, e in zip(beta, expo)):
                continue
            c = coef
            for b, e in zip(beta, expo):
                for r in range(b):
                    c *= e - r
            term = np.full(pts.shape[0], c)
            for j, (b, e) in enumerate(zip(beta, expo)):
                if e - b:
                    term = term * pts[:, j] ** (e - b)
            out += term
        return out

    def __repr__(self):
        return f"PolynomialField({self.terms!r}, dim={self.dim})"


class CallableField(ScalarField):
    """Field backed by user callables for value, gradient and Hessian.

    Each callable takes an ``(n, dim)`` array. Derivatives beyond the
    supplied ones raise :class:`InsufficientSmoothnessError`.
    """

    def __init__(
        self,
        dim: int,
        value: Callable,
        gradient: Optional[Callable] = None,
        hessian: Optional[Callable] = None,
    ):
        self.dim = dim
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self.max_order = 0 if gradient is None else (1 if hessian is None else 2)

    def partial(self, beta, x) -> np.ndarray:
        order = sum(beta)
        self.require_order(order)
        pts = _points(x, self.dim)
        if order == 0:
            return np.asarray(self._value(pts), dtype=float).reshape(-1)
        idx = [j for j, b in enumerate(beta) for _ in range(b)]
        if order == 1:
            return np.asarray(self._gradient(pts), dtype=float).reshape(-1, self.dim)[:, idx[0]]
        hess = np.asarray(self._hessian(pts), dtype=float).reshape(-1, self.dim, self.dim)
        return hess[:, idx[0], idx[1]]


class AffinePullback(ScalarField):
    """``x ↦ f(A x + b)``; partials follow from the chain rule on columns of ``A``."""

    def __init__(self, field: ScalarField, matrix, shift=None):
        self.field = field
        self.dim = field.dim
        self.matrix = np.asarray(matrix, dtype=float)
        self.shift = np.zeros(self.dim) if shift is None else np.asarray(shift, float)
        self.max_order = field.max_order
        self.poly_degree = field.poly_degree

    def partial(self, beta, x) -> np.ndarray:
        pts = _points(x, self.dim)
        mapped = pts @ self.matrix.T + self.shift
        cols = [self.matrix[:, j] for j, b in enumerate(beta) for _ in range(b)]
        if not cols:
            return self.field.value(mapped)
        return self.field.directional(np.array(cols), mapped)


class DirectionalDerivative(ScalarField):
    """The field ``D^n f[v_1, ..., v_n]`` as a new scalar field."""

    def __init__(self, field: ScalarField, vectors):
        self.field = field
        self.dim = field.dim
        self.vectors = np.asarray(vectors, dtype=float).reshape(-1, self.dim)
        n = self.vectors.shape[0]
        field.require_order(n)
        self.max_order = None if field.max_order is None else field.max_order - n
        self.poly_degree = None if field.poly_degree is None else max(field.poly_degree - n, 0)

    def partial(self, beta, x) -> np.ndarray:
        axes = np.eye(self.dim)
        extra = [axes[j] for j, b in enumerate(beta) for _ in range(b)]
        vecs = np.vstack([self.vectors] + extra) if extra else self.vectors
        if vecs.shape[0] == 0:
            return self.field.value(x)
        return self.field.directional(vecs, x)


class DifferenceField(ScalarField):
    def __init__(self, a: ScalarField, b: ScalarField):
        if a.dim != b.dim:
            raise ValueError("dimension mismatch")
        self.a, self.b = a, b
        self.dim = a.dim
        orders = [o for o in (a.max_order, b.max_order) if o is not None]
        self.max_order = min(orders) if orders else None
        if a.poly_degree is not None and b.poly_degree is not None:
            self.poly_degree = max(a.poly_degree, b.poly_degree)
        else:
            self.poly_degree = None

    def partial(self, beta, x) -> np.ndarray:
        return self.a.partial(beta, x) - self.b.partial(beta, x)


def study_field(dim: int) -> PolynomialField:
    """Quadratic fields used by the studies: x^2 + y^2 (2-D), x^2 + y^2/4 + z^2 (3-D)."""
    if dim == 2:
        return PolynomialField({(2, 0): 1.0, (0, 2): 1.0})
    if dim == 3:
        return PolynomialField({(2, 0, 0): 1.0, (0, 2, 0): 0.25, (0, 0, 2): 1.0})
    raise ValueError("dim must be 2 or 3")

