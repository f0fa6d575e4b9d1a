"""Closed-form shadow of the unit 4-norm ball of R^3 on the plane x+y+z=0.

In the orthonormal coordinates ``(u, v, w)`` of :func:`uvw_basis` the plane
is ``w = 0``. Stationarity of the gauge in ``w`` reduces to the depressed
cubic

    X^3 + 3(u^2+v^2) X + (sqrt(2)/2) v (v^2 - 3u^2) = 0,

whose discriminant is never positive, so it has a single real root given by
Cardano's formula. Everything here is independent of the numerical fiber
solver in :mod:`shadowproj.shadow`, which makes it a cross-check for it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .gauge_core import PNormBall
from .shadow import BoundaryPolyline
from .subspace import OrthoFrame, frame_from_bases

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)
MEMBER_TOL = 1e-9


@dataclass(frozen=True)
class CubicSolution:
    u: float
    v: float
    p_coef: float
    q_coef: float
    discriminant: float
    delta: float
    w_star: float

    @property
    def residual(self) -> float:
        w = self.w_star
        return w**3 + self.p_coef * w + self.q_coef


def uvw_basis() -> np.ndarray:
    """Columns are the u, v and w directions, in that order."""
    return np.array(
        [
            [0.0, math.sqrt(2.0 / 3.0), 1.0 / SQRT3],
            [1.0 / SQRT2, -1.0 / SQRT6, 1.0 / SQRT3],
            [-1.0 / SQRT2, -1.0 / SQRT6, 1.0 / SQRT3],
        ]
    )


def quartic_problem() -> tuple[PNormBall, OrthoFrame]:
    """The 4-norm ball and the (u, v) frame of the plane x+y+z=0."""
    B = uvw_basis()
    return PNormBall(p=4.0, dim=3), frame_from_bases(B[:, :2], B[:, 2:])


def real_cbrt(a: float) -> float:
    return math.copysign(abs(a) ** (1.0 / 3.0), a)


def cubic_solve(u: float, v: float) -> CubicSolution:
    """Coefficients, discriminant and the Cardano root for one ``(u, v)``."""
    u, v = float(u), float(v)
    r2 = u * u + v * v
    b = v * v - 3.0 * u * u
    delta = 0.125 * v * v * b * b + r2**3
    half_q = 0.25 * SQRT2 * v * b
    sd = math.sqrt(delta)
    w = real_cbrt(-half_q - sd) + real_cbrt(-half_q + sd)
    return CubicSolution(
        u=u,
        v=v,
        p_coef=3.0 * r2,
        q_coef=2.0 * half_q,
        discriminant=-(108.0 * r2**3 + 13.5 * v * v * b * b),
        delta=delta,
        w_star=w,
    )


def cubic_solve_many(u, v) -> np.ndarray:
    """Vectorised :func:`cubic_solve`.

    Returns an (N, 5) array with columns ``p_coef, q_coef, discriminant,
    delta, w_star``.
    """
    u = np.ascontiguousarray(np.asarray(u, dtype=np.float64).reshape(-1))
    v = np.ascontiguousarray(np.asarray(v, dtype=np.float64).reshape(-1))
    return kernels.cardano_rows(u, v)


def xyz(u, v, w):
    """Ambient coordinates of ``(u, v, w)``, written out term by term."""
    x = math.sqrt(2.0 / 3.0) * v + w / SQRT3
    y = u / SQRT2 - v / SQRT6 + w / SQRT3
    z = -u / SQRT2 - v / SQRT6 + w / SQRT3
    return x, y, z


def analytic_eta(u, v, w):
    x, y, z = xyz(u, v, w)
    return (x**4 + y**4 + z**4) ** 0.25


def stationarity_bracket(u, v, w):
    return w**3 / 3.0 + (u * u + v * v) * w - 0.5 * SQRT2 * u * u * v + SQRT2 / 6.0 * v**3


def eta_partial_w(u, v, w):
    """``d eta / d w`` as ``stationarity_bracket * eta^-3``; three times the
    bracket is :func:`monic_cubic` evaluated at ``X = w``."""
    return stationarity_bracket(u, v, w) * analytic_eta(u, v, w) ** -3


def monic_cubic(u, v, X):
    return X**3 + 3.0 * (u * u + v * v) * X + 0.5 * SQRT2 * v * (v * v - 3.0 * u * u)


def analytic_shadow_gauge(u: float, v: float) -> float:
    if u == 0.0 and v == 0.0:
        return 0.0
    return float(analytic_eta(u, v, cubic_solve(u, v).w_star))


def analytic_shadow_membership(u: float, v: float, tol: float = MEMBER_TOL) -> bool:
    """Whether ``(u, v)`` lies in the shadow, from the closed form alone."""
    return analytic_shadow_gauge(u, v) <= 1.0 + tol


def analytic_boundary_trace(n_samples: int) -> BoundaryPolyline:
    """Boundary of the shadow at ``n_samples`` equal angles.

    Both the cubic root and the gauge are homogeneous of degree one in
    ``(u, v)``, so the radius at angle theta is ``1 / eta(cos, sin, w*)``.
    """
    if int(n_samples) != n_samples or n_samples < 8:
        raise ValueError(f"n_samples must be an integer >= 8, got {n_samples!r}")
    n_samples = int(n_samples)
    thetas = 2.0 * np.pi * np.arange(n_samples) / n_samples
    c, s = np.cos(thetas), np.sin(thetas)
    w = cubic_solve_many(c, s)[:, 4]
    eta = analytic_eta(c, s, w)
    r = 1.0 / eta
    return BoundaryPolyline(
        points=np.column_stack([r * c, r * s]),
        thetas=thetas,
        fiber_points=(w * r)[:, None],
    )
