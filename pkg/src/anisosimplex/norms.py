"""Sobolev seminorms on a simplex and the right-hand sides of the error bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import AffinePullback, DirectionalDerivative, ScalarField, multi_indices
from .geometry import (
    Simplex,
    as_simplex,
    diameter_and_edges,
    measure,
    param_H_T0,
    standard_position,
)
from .quadrature import make_rule

DEFAULT_DEGREE = 12
H_SCALED = "h_scaled"
DIRECTIONAL = "directional"


def _exponent(value) -> float:
    if value in ("inf", "infinity", math.inf):
        return math.inf
    v = float(value)
    if v not in (1.0, 2.0, math.inf):
        raise ValueError(f"exponent must be 1, 2 or inf, got {value!r}")
    return v


@dataclass(frozen=True)
class NormSpec:
    """Orders and exponents of an interpolation error bound.

    ``m``/``q`` describe the seminorm of the error, ``ell``/``p`` the
    smoothness and integrability of the source field.
    """

    m: int = 1
    q: float = 2.0
    ell: int = 2
    p: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "q", _exponent(self.q))
        object.__setattr__(self, "p", _exponent(self.p))
        if not 0 <= self.m <= self.ell:
            raise ValueError(f"need 0 <= m <= ell, got m={self.m}, ell={self.ell}")

    @property
    def measure_power(self) -> float:
        inv = lambda r: 0.0 if r == math.inf else 1.0 / r  # noqa: E731
        return inv(self.q) - inv(self.p)


def _default_degree(f: ScalarField, m: int, q: float) -> int:
    if f.poly_degree is not None and q == 2.0:
        return max(1, 2 * f.poly_degree)
    return DEFAULT_DEGREE


def sobolev_seminorm(s, f: ScalarField, m: int, q=2.0, degree: int | None = None) -> float:
    """(sum over |beta| = m of ||d^beta f||_q^q)^(1/q), one term per multi-index.

    ``q = inf`` takes the maximum over the nodes of a degree-12 rule plus the
    vertices, which is a lower bound for non-polynomial integrands.
    """
    s = as_simplex(s)
    q = _exponent(q)
    f.require_order(m)
    betas = multi_indices(s.dim, m)
    if q == math.inf:
        rule = make_rule(s.dim, degree or DEFAULT_DEGREE)
        pts = np.vstack([rule.points(s), s.vertices])
        return float(max(np.max(np.abs(f.partial(b, pts))) for b in betas))
    rule = make_rule(s.dim, degree or _default_degree(f, m, q))
    pts = rule.points(s)
    w = rule.scaled_weights(s)
    total = 0.0
    for b in betas:
        vals = np.abs(f.partial(b, pts))
        total += float(w @ vals**q)
    return total ** (1.0 / q)


def _prefactor(s: Simplex, spec: NormSpec) -> float:
    vol = measure(s)
    h, _ = diameter_and_edges(s)
    return vol**spec.measure_power * (param_H_T0(s) / h) ** spec.m


def anisotropic_rhs(s, field: ScalarField, spec: NormSpec, mode: str = H_SCALED) -> float:
    """Right-hand side of the anisotropic bound, without the unknown constant.

    ``H_SCALED``: sum over |gamma| = ell - m of
    mathscr_H^gamma |d^gamma (f o Phi_T0)|_{W^{m,p}(T)} on the standard-position
    simplex T. ``DIRECTIONAL``: sum of alpha^gamma |d_r^gamma f|_{W^{m,p}(T0)}
    with derivatives along the rotated directions A_T0 r_i.
    """
    s = as_simplex(s)
    if spec.ell - spec.m < 1:
        raise ValueError("the anisotropic bound needs ell - m >= 1")
    field.require_order(spec.ell)
    sp = standard_position(s)
    total = 0.0
    if mode == H_SCALED:
        pulled = AffinePullback(field, sp.rotation, sp.translation)
        t_std = Simplex(sp.standard_vertices())
        weights = sp.mathscr_H
        for gamma in multi_indices(s.dim, spec.ell - spec.m):
            axes = np.vstack([np.eye(s.dim)[j] for j, g in enumerate(gamma) for _ in range(g)])
            deriv = DirectionalDerivative(pulled, axes)
            total += float(np.prod(weights ** np.array(gamma))) * sobolev_seminorm(
                t_std, deriv, spec.m, spec.p
            )
    elif mode == DIRECTIONAL:
        dirs = sp.rotated_directions()
        for gamma in multi_indices(s.dim, spec.ell - spec.m):
            vecs = np.vstack([dirs[j] for j, g in enumerate(gamma) for _ in range(g)])
            deriv = DirectionalDerivative(field, vecs)
            total += float(np.prod(sp.alpha ** np.array(gamma))) * sobolev_seminorm(
                s, deriv, spec.m, spec.p
            )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _prefactor(s, spec) * total


def classical_rhs(s, field: ScalarField, spec: NormSpec) -> float:
    """|T0|^(1/q-1/p) (a_max/a_min)^m (H_T0/h)^m h^(ell+1-m) |f|_{W^{ell+1,p}}."""
    s = as_simplex(s)
    field.require_order(spec.ell + 1)
    sp = standard_position(s)
    h, _ = diameter_and_edges(s)
    ratio = float(np.max(sp.alpha) / np.min(sp.alpha))
    semi = sobolev_seminorm(s, field, spec.ell + 1, spec.p)
    return _prefactor(s, spec) * ratio**spec.m * h ** (spec.ell + 1 - spec.m) * semi
