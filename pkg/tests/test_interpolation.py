import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anisosimplex.errors import DegenerateSimplexError, InsufficientSmoothnessError
from anisosimplex.fields import (
    AffinePullback,
    CallableField,
    DirectionalDerivative,
    PolynomialField,
    multi_indices,
    study_field,
)
from anisosimplex.geometry import Simplex
from anisosimplex.interpolation import (
    OperatorSpec,
    SimplexPolynomial,
    barycentric,
    barycentric_gradients,
    interpolate,
    interpolation_nodes,
)
from anisosimplex.quadrature import make_rule
from anisosimplex.studies import FamilySpec, family_generate

from conftest import random_simplex

UNIT_TRI = Simplex([[0, 0], [1, 0], [0, 1]])
REF_TET = Simplex([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
SPECS = [OperatorSpec("lagrange", 1), OperatorSpec("lagrange", 2), OperatorSpec("cr", 1)]


def random_poly(rng, dim, degree):
    terms = {}
    for d in range(degree + 1):
        for e in multi_indices(dim, d):
            terms[e] = rng.uniform(-1, 1)
    return PolynomialField(terms, dim)


def interior_points(rng, s, n=50):
    lam = rng.dirichlet(np.ones(s.dim + 1), size=n)
    return lam @ s.vertices


def test_operator_spec_validation():
    assert OperatorSpec("Crouzeix-Raviart").kind == "cr"
    with pytest.raises(ValueError):
        OperatorSpec("lagrange", 3)
    with pytest.raises(ValueError):
        OperatorSpec("cr", 2)
    with pytest.raises(ValueError):
        OperatorSpec("hermite", 1)


def test_barycentric_examples():
    for i, v in enumerate(UNIT_TRI.vertices):
        np.testing.assert_allclose(barycentric(UNIT_TRI, v), np.eye(3)[i], atol=1e-15)
    np.testing.assert_allclose(barycentric(REF_TET, REF_TET.vertices.mean(axis=0)), [0.25] * 4)
    np.testing.assert_allclose(barycentric(UNIT_TRI, [0.25, 0.25]), [0.5, 0.25, 0.25])
    with pytest.raises(DegenerateSimplexError):
        barycentric(Simplex([[0, 0], [1, 1], [2, 2]]), [0, 0])


@given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
def test_barycentric_affine_and_partition(dim, seed):
    g = np.random.default_rng(seed)
    s = Simplex(random_simplex(g, dim, anisotropic=False))
    p, q = g.normal(size=(2, dim))
    t = g.uniform()
    lp, lq = barycentric(s, p), barycentric(s, q)
    assert lp.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(barycentric(s, t * p + (1 - t) * q), t * lp + (1 - t) * lq, atol=1e-9)
    grads = barycentric_gradients(s)
    np.testing.assert_allclose(grads.sum(axis=0), 0, atol=1e-9)


def test_interpolation_nodes():
    np.testing.assert_allclose(interpolation_nodes(UNIT_TRI, OperatorSpec()), UNIT_TRI.vertices)
    cr = interpolation_nodes(UNIT_TRI, OperatorSpec("cr"))
    assert sorted(map(tuple, cr)) == [(0, 0.5), (0.5, 0), (0.5, 0.5)]
    assert interpolation_nodes(REF_TET, OperatorSpec("lagrange", 2)).shape == (10, 3)


def test_interpolate_x_squared():
    f = PolynomialField({(2, 0): 1.0})
    p = interpolate(f, UNIT_TRI, OperatorSpec())
    pts = np.random.default_rng(1).uniform(0, 0.5, size=(20, 2))
    np.testing.assert_allclose(p(pts), pts[:, 0], atol=1e-15)


def test_interpolate_example_two_closed_form():
    for eps in (3.0, 4.0):
        s = 1 / 16
        t = family_generate(FamilySpec("ConvII", eps=eps, s=s))
        p = interpolate(study_field(3), t, OperatorSpec())
        grad = p.gradient(np.zeros(3))[0]
        expect = [s, s**eps / 4 - s ** (2 - eps) / 4, s]
        np.testing.assert_allclose(grad, expect, rtol=1e-10)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.kind}{s.k}")
@pytest.mark.parametrize("dim", [2, 3])
def test_interpolant_matches_nodes(spec, dim, rng):
    s = Simplex(random_simplex(rng, dim))
    f = CallableField(dim, lambda x: np.sin(x.sum(axis=1)) + x[:, 0] ** 3)
    p = interpolate(f, s, spec)
    nodes = interpolation_nodes(s, spec)
    np.testing.assert_allclose(p(nodes), f(nodes), rtol=1e-12, atol=1e-13)
    assert len(p.coefficients) == math.comb(p.degree + dim, dim)
    if spec.kind == "cr":
        assert p.degree == 1


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.kind}{s.k}")
@pytest.mark.parametrize("dim", [2, 3])
def test_polynomial_reproduction(spec, dim, rng):
    for _ in range(20):
        s = Simplex(random_simplex(rng, dim, anisotropic=False))
        p = random_poly(rng, dim, spec.k)
        ip = interpolate(p, s, spec)
        x = interior_points(rng, s)
        assert np.max(np.abs(ip(x) - p(x))) < 1e-11 * max(1.0, np.max(np.abs(p(x))))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.kind}{s.k}")
@pytest.mark.parametrize("dim", [2, 3])
def test_pullback_commutes(spec, dim, rng):
    ref = Simplex(np.vstack([np.zeros(dim), np.eye(dim)]))
    t0 = Simplex(random_simplex(rng, dim))
    b = t0.edge_matrix()
    shift = t0.vertices[0]
    f = CallableField(dim, lambda x: np.exp(0.3 * x[:, 0]) * np.cos(x[:, -1]))
    left = interpolate(f, t0, spec)
    right = interpolate(lambda xh: f(xh @ b.T + shift), ref, spec)
    xh = interior_points(rng, ref)
    np.testing.assert_allclose(left(xh @ b.T + shift), right(xh), atol=1e-11)


def test_field_gradients_match_finite_differences(rng):
    fields = [
        study_field(2),
        study_field(3),
        CallableField(
            2,
            lambda x: np.sin(x[:, 0]) * x[:, 1] ** 2,
            lambda x: np.column_stack([np.cos(x[:, 0]) * x[:, 1] ** 2, 2 * np.sin(x[:, 0]) * x[:, 1]]),
            lambda x: np.stack(
                [
                    np.stack([-np.sin(x[:, 0]) * x[:, 1] ** 2, 2 * np.cos(x[:, 0]) * x[:, 1]], -1),
                    np.stack([2 * np.cos(x[:, 0]) * x[:, 1], 2 * np.sin(x[:, 0])], -1),
                ],
                1,
            ),
        ),
    ]
    for f in fields:
        x = rng.uniform(0.2, 1.0, size=(10, f.dim))
        h = 1e-5
        g = f.gradient(x)
        for j in range(f.dim):
            e = np.zeros(f.dim)
            e[j] = h
            fd = (f(x + e) - f(x - e)) / (2 * h)
            np.testing.assert_allclose(g[:, j], fd, rtol=1e-6, atol=1e-8)
        hess = f.hessian(x)
        np.testing.assert_allclose(hess, np.swapaxes(hess, 1, 2), atol=1e-12)


def test_callable_field_smoothness_limit():
    f = CallableField(2, lambda x: x[:, 0])
    with pytest.raises(InsufficientSmoothnessError):
        f.gradient(np.zeros((1, 2)))


def test_pullback_and_directional_fields(rng):
    f = random_poly(rng, 3, 3)
    a = rng.normal(size=(3, 3))
    b = rng.normal(size=3)
    pulled = AffinePullback(f, a, b)
    x = rng.normal(size=(5, 3))
    # d/dx_j f(Ax+b) = grad f(Ax+b) . A[:, j]
    np.testing.assert_allclose(pulled.gradient(x), f.gradient(x @ a.T + b) @ a, rtol=1e-10)
    v = rng.normal(size=3)
    d = DirectionalDerivative(f, v)
    np.testing.assert_allclose(d(x), f.gradient(x) @ v, rtol=1e-10)


@pytest.mark.parametrize("dim", [2, 3])
def test_simplex_polynomial_exact_calculus(dim, rng):
    s = Simplex(random_simplex(rng, dim, anisotropic=False))
    p = interpolate(random_poly(rng, dim, 2), s, OperatorSpec("lagrange", 2))
    rule = make_rule(dim, 4)
    sq = p * p
    assert sq.integrate() == pytest.approx(rule.integrate(lambda x: p(x) ** 2, s), rel=1e-12)
    x = interior_points(rng, s, 5)
    for beta in itertools.chain(multi_indices(dim, 1), multi_indices(dim, 2)):
        d = p.derivative(beta)
        np.testing.assert_allclose(d(x), p.partial(beta, x))
    # third derivatives of a quadratic vanish
    assert np.all(p.derivative((3,) + (0,) * (dim - 1))(x) == 0)


def test_simplex_polynomial_coefficient_count():
    with pytest.raises(ValueError):
        SimplexPolynomial(UNIT_TRI, 2, [1.0, 2.0])
