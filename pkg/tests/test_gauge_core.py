import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shadowproj.errors import DomainError, ValidationError
from shadowproj.gauge_core import (
    Ellipsoid,
    LinearImage,
    PNormBall,
    Recentered,
    body_from_dict,
    boundary_point,
    gauge_eval,
    gauge_gradient,
    support_function,
    supporting_hyperplane_normal,
)
from shadowproj.oracle import finite_difference_gradient

from conftest import body_catalog

BALL4 = PNormBall(p=4.0, dim=3)
ELL = Ellipsoid(Q=np.diag([0.25, 1.0]))

vec3 = arrays(np.float64, 3, elements=st.floats(-5, 5, allow_nan=False))


# -- examples --------------------------------------------------------------

def test_gauge_examples():
    assert gauge_eval(BALL4, [1, 0, 0]) == 1.0
    assert gauge_eval(BALL4, [1, 1, 1]) == pytest.approx(3 ** 0.25, rel=1e-15)
    assert gauge_eval(BALL4, [1, 1, 1]) == pytest.approx(1.31607, abs=5e-6)
    assert gauge_eval(ELL, [2, 0]) == pytest.approx(1.0, rel=1e-15)
    assert gauge_eval(BALL4, [0, 0, 0]) == 0.0


def test_gradient_examples():
    np.testing.assert_allclose(gauge_gradient(BALL4, [1, 0, 0]), [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(
        finite_difference_gradient(BALL4, [1, 0, 0]), [1, 0, 0], rtol=1e-6, atol=1e-9
    )
    np.testing.assert_allclose(gauge_gradient(PNormBall(2.0, 2), [3, 4]), [0.6, 0.8], rtol=1e-15)
    np.testing.assert_allclose(gauge_gradient(Ellipsoid(np.eye(2)), [0, 2]), [0, 1], atol=1e-15)


def test_gradient_at_origin_is_domain_error():
    for body in body_catalog().values():
        with pytest.raises(DomainError):
            gauge_gradient(body, np.zeros(3))


def test_support_examples():
    assert support_function(PNormBall(2.0, 3), [0, 0, 1]) == pytest.approx(1.0)
    u = np.ones(3) / math.sqrt(3)
    assert support_function(BALL4, u) == pytest.approx(3 ** 0.75 / math.sqrt(3), rel=1e-14)
    assert support_function(ELL, [1, 0]) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(DomainError):
        support_function(ELL, [2, 0])


def test_support_matches_boundary_sampling_oracle():
    # maximise <x|u> over a dense sampling of the 4-norm sphere
    u = np.ones(3) / math.sqrt(3)
    th = np.linspace(0, np.pi, 801)
    ph = np.linspace(0, 2 * np.pi, 1601)
    T, P = np.meshgrid(th, ph)
    D = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
    X = D / BALL4.gauge_many(D)[:, None]
    assert np.max(X @ u) == pytest.approx(support_function(BALL4, u), rel=1e-5)


def test_boundary_point_examples():
    np.testing.assert_allclose(boundary_point(BALL4, [2, 0, 0]), [1, 0, 0])
    np.testing.assert_allclose(boundary_point(BALL4, [1, 1, 1]), np.ones(3) / 3 ** 0.25, rtol=1e-15)
    np.testing.assert_allclose(boundary_point(ELL, [1, 0]), [2, 0], rtol=1e-15)
    with pytest.raises(DomainError):
        boundary_point(BALL4, [0, 0, 0])


# -- construction-time validation ------------------------------------------

@pytest.mark.parametrize("p", [1.0, 0.5, 65.0, float("inf"), float("nan")])
def test_bad_exponent_rejected(p):
    with pytest.raises(ValidationError):
        PNormBall(p=p, dim=3)


def test_bad_bodies_rejected():
    with pytest.raises(ValidationError):
        Ellipsoid(Q=np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ValidationError):
        Ellipsoid(Q=np.diag([1.0, -1.0]))
    with pytest.raises(ValidationError):
        LinearImage(M=np.array([[1.0, 2.0, 0], [2.0, 4.0, 0], [0, 0, 1]]), inner=BALL4)
    with pytest.raises(ValidationError):
        Recentered(c=[1.0, 0, 0], inner=BALL4)


def test_bodies_are_immutable():
    with pytest.raises(Exception):
        BALL4.p = 3.0
    with pytest.raises(ValueError):
        ELL.Q[0, 0] = 5.0


def test_dict_round_trip(catalog):
    for body in catalog.values():
        again = body_from_dict(body.to_dict())
        X = np.random.default_rng(0).standard_normal((20, 3))
        np.testing.assert_allclose(again.gauge_many(X), body.gauge_many(X), rtol=1e-14)


@pytest.mark.parametrize("data", [
    {"p": 4},
    {"kind": "cube"},
    {"kind": "pnorm_ball", "p": 4.0},
    {"kind": "ellipsoid", "Q": "x"},
])
def test_dict_errors(data):
    with pytest.raises(ValidationError):
        body_from_dict(data)


# -- variant-specific closed forms -----------------------------------------

def test_linear_image_of_ball_is_ellipsoid():
    M = np.array([[2.0, 0.3, 0], [0, 1.0, 0.1], [0.2, 0, 0.5]])
    img = LinearImage(M=M, inner=PNormBall(2.0, 3))
    Minv = np.linalg.inv(M)
    ell = Ellipsoid(Q=Minv.T @ Minv)
    X = np.random.default_rng(1).standard_normal((200, 3))
    np.testing.assert_allclose(img.gauge_many(X), ell.gauge_many(X), rtol=1e-13)
    for u in X[:20] / np.linalg.norm(X[:20], axis=1, keepdims=True):
        assert img.support(u) == pytest.approx(ell.support(u), rel=1e-13)


def test_recentered_ball_matches_shifted_sphere():
    # sphere recentred at c: gauge solves |c + x/t| = 1
    c = np.array([0.3, -0.2, 0.1])
    body = Recentered(c=c, inner=PNormBall(2.0, 3))
    rng = np.random.default_rng(2)
    for x in rng.standard_normal((50, 3)):
        a, b, cc = x @ x, 2 * (c @ x), c @ c - 1.0
        s = (-b + math.sqrt(b * b - 4 * a * cc)) / (2 * a)
        assert body.gauge(x) == pytest.approx(1.0 / s, rel=1e-13)
    X = rng.standard_normal((50, 3))
    np.testing.assert_allclose(body.gauge_many(X), [body.gauge(x) for x in X], rtol=1e-14)
    u = np.array([0.0, 0.6, 0.8])
    assert body.support(u) == pytest.approx(1.0 - c @ u)


# -- invariants -------------------------------------------------------------

BODIES = body_catalog()


@pytest.mark.parametrize("name", sorted(BODIES))
@given(x=vec3, t=st.floats(0, 10))
def test_homogeneity(name, x, t):
    body = BODIES[name]
    mu = body.gauge(x)
    assert abs(body.gauge(t * x) - t * mu) <= 1e-10 * (1 + t * mu)


@pytest.mark.parametrize("name", sorted(BODIES))
@given(x1=vec3, x2=vec3)
def test_subadditivity(name, x1, x2):
    body = BODIES[name]
    assert body.gauge(x1 + x2) <= body.gauge(x1) + body.gauge(x2) + 1e-10


@pytest.mark.parametrize("name", sorted(BODIES))
def test_gradient_matches_finite_differences(name, rng):
    body = BODIES[name]
    for x in rng.standard_normal((1000, 3)):
        g = gauge_gradient(body, x)
        fd = finite_difference_gradient(body, x)
        assert np.linalg.norm(g - fd) <= 1e-6 * np.linalg.norm(g)


@pytest.mark.parametrize("name", sorted(BODIES))
def test_euler_identity(name, rng):
    body = BODIES[name]
    for x in rng.standard_normal((300, 3)) * 3:
        mu = body.gauge(x)
        assert abs(gauge_gradient(body, x) @ x - mu) <= 1e-9 * mu


@pytest.mark.parametrize("name", sorted(BODIES))
def test_subgradient_inequality(name, rng):
    body = BODIES[name]
    X = rng.standard_normal((300, 3))
    Y = rng.standard_normal((300, 3)) * 2
    for x, y in zip(X, Y):
        b = boundary_point(body, x)
        g = gauge_gradient(body, b)
        assert body.gauge(y) >= body.gauge(b) + g @ (y - b) - 1e-9


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0, 7.5])
def test_support_is_dual_norm(p, rng):
    ball = PNormBall(p, 4)
    q = p / (p - 1)
    for u in rng.standard_normal((100, 4)):
        u /= np.linalg.norm(u)
        assert abs(support_function(ball, u) - np.sum(np.abs(u) ** q) ** (1 / q)) <= 1e-10


def test_gradient_stable_near_axes_for_small_p():
    ball = PNormBall(1.2, 3)
    g = gauge_gradient(ball, [1.0, 1e-300, 0.0])
    assert np.all(np.isfinite(g))
    np.testing.assert_allclose(g, [1.0, 0.0, 0.0], atol=1e-50)


def test_supporting_hyperplane_normal_is_unit(catalog, rng):
    for body in catalog.values():
        n = supporting_hyperplane_normal(body, rng.standard_normal(3))
        assert np.linalg.norm(n) == pytest.approx(1.0)


def test_gauge_many_matches_scalar(catalog, rng):
    X = rng.standard_normal((100, 3))
    X[5] = 0
    for body in catalog.values():
        np.testing.assert_allclose(body.gauge_many(X), [body.gauge(x) for x in X], rtol=1e-13)
