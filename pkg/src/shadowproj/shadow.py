"""Gauge of the orthogonal projection of a convex body onto a subspace.

Splitting ``x = V y + W w`` turns the body gauge into a function of two
arguments, ``eta(y, w) = mu_A(V y + W w)``. For fixed ``y`` this is convex in
``w``; its minimum over the fiber is the gauge of the shadow at ``V y``, and
the minimiser is exactly where the partial gradient along the fiber
vanishes. The minimum is found with a damped Newton method.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, ValidationError
from .gauge_core import ConvexBody
from .subspace import OrthoFrame

TOL_GRAD = 1e-10
TOL_MEMBER = 1e-9
MAX_ITER = 200
ARMIJO = 1e-4
HESS_STEP = 1e-5
MAX_HALVINGS = 60


@dataclass(frozen=True, eq=False)
class FiberQuery:
    body: ConvexBody
    frame: OrthoFrame
    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64).reshape(-1)
        if self.body.dim != self.frame.dim:
            raise ValidationError(
                f"body dimension {self.body.dim} does not match frame dimension {self.frame.dim}"
            )
        if y.shape[0] != self.frame.m:
            raise ValidationError(f"y must have {self.frame.m} coordinates, got {y.shape[0]}")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def base(self) -> np.ndarray:
        return self.frame.V @ self.y

    def point(self, w) -> np.ndarray:
        x = self.base
        if self.frame.fiber_dim:
            x = x + self.frame.W @ np.asarray(w, dtype=np.float64)
        return np.ascontiguousarray(x)


@dataclass(frozen=True)
class ShadowResult:
    w_star: np.ndarray
    t_star: float
    grad_norm: float
    iterations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class BoundaryPolyline:
    """Closed boundary polyline of a planar shadow, ordered by angle.

    ``fiber_points`` holds, for each boundary point, the fiber coordinates of
    the body boundary point lying above it.
    """

    points: np.ndarray
    thetas: np.ndarray
    fiber_points: np.ndarray | None = None
    grad_norms: np.ndarray | None = None
    closed: bool = field(default=True)

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])


def eta_eval(q: FiberQuery, w) -> float:
    """``mu_A(V y + W w)``."""
    return q.body.gauge(q.point(w))


def eta_partial_perp(q: FiberQuery, w) -> np.ndarray:
    """Partial gradient of ``eta`` along the fiber, ``W^T grad mu_A``."""
    x = q.point(w)
    if not np.any(x):
        raise DomainError("eta is not differentiable at the origin")
    return q.frame.W.T @ q.body.gradient(x)


def _numeric_hessian(q: FiberQuery, w: np.ndarray, step: float) -> np.ndarray:
    k = w.shape[0]
    H = np.empty((k, k))
    for i in range(k):
        e = np.zeros(k)
        e[i] = step
        H[:, i] = (eta_partial_perp(q, w + e) - eta_partial_perp(q, w - e)) / (2.0 * step)
    return 0.5 * (H + H.T)


def fiber_minimize(
    q: FiberQuery,
    *,
    tol_grad: float = TOL_GRAD,
    max_iter: int = MAX_ITER,
    hess_step: float = HESS_STEP,
) -> ShadowResult:
    """Minimise ``w -> eta(y, w)`` over the fiber above ``y``.

    Damped Newton with a central-difference Hessian and Armijo backtracking;
    falls back to steepest descent when the Hessian is not positive
    definite. Converged means ``|grad| <= tol_grad * (1 + t)``.

    ``eta`` is jointly homogeneous of degree one, so the solve runs at
    ``y / |y|`` and the result is rescaled; the fiber gradient is unchanged
    by the scaling.
    """
    k = q.frame.fiber_dim
    if k == 0:
        return ShadowResult(np.zeros(0), eta_eval(q, None), 0.0, 0, True)
    scale = float(np.linalg.norm(q.y))
    if scale == 0.0:
        return ShadowResult(np.zeros(k), 0.0, 0.0, 0, True)
    unit = FiberQuery(q.body, q.frame, q.y / scale)
    w, t, gn, it, ok = _newton(unit, tol_grad, max_iter, hess_step)
    return ShadowResult(w * scale, t * scale, gn, it, ok)


def _newton(q: FiberQuery, tol_grad: float, max_iter: int, hess_step: float):
    k = q.frame.fiber_dim
    w = np.zeros(k)
    f = eta_eval(q, w)
    g = eta_partial_perp(q, w)
    eps = np.finfo(float).eps
    it = 0
    for it in range(max_iter + 1):
        gn = float(np.linalg.norm(g))
        if gn <= tol_grad * (1.0 + f):
            return w, f, gn, it, True
        if it == max_iter:
            break

        h = hess_step * max(1.0, float(np.linalg.norm(q.point(w))))
        H = _numeric_hessian(q, w, h)
        try:
            L = np.linalg.cholesky(H)
            d = -np.linalg.solve(L.T, np.linalg.solve(L, g))
        except np.linalg.LinAlgError:
            d = -g
        slope = float(g @ d)
        if not slope < 0.0:
            d, slope = -g, -gn * gn

        alpha = 1.0
        accepted = False
        for _ in range(MAX_HALVINGS):
            w_new = w + alpha * d
            f_new = eta_eval(q, w_new)
            if f_new <= f + ARMIJO * alpha * slope:
                accepted = True
                break
            # values flat at rounding level: judge the step by the gradient
            if abs(f_new - f) <= 4.0 * eps * max(f, 1.0):
                g_try = eta_partial_perp(q, w_new)
                if np.linalg.norm(g_try) < gn:
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            break
        w, f = w_new, f_new
        g = eta_partial_perp(q, w)

    gn = float(np.linalg.norm(g))
    return w, f, gn, it, gn <= tol_grad * (1.0 + f)


def shadow_gauge(body: ConvexBody, frame: OrthoFrame, y, *, tol_grad: float = TOL_GRAD) -> float:
    """Gauge of the shadow of ``body`` at the point with subspace coordinates ``y``.

    Raises :class:`ConvergenceError` if the fiber solve does not converge.
    """
    res = fiber_minimize(FiberQuery(body, frame, y), tol_grad=tol_grad)
    if not res.converged:
        raise ConvergenceError(
            f"fiber solve did not converge at y={np.asarray(y).tolist()} "
            f"(|grad|={res.grad_norm:.3e} after {res.iterations} iterations)",
            result=res,
        )
    return res.t_star


def membership(
    body: ConvexBody,
    frame: OrthoFrame,
    y,
    *,
    tol_member: float = TOL_MEMBER,
    tol_grad: float = TOL_GRAD,
) -> bool:
    """Whether subspace coordinates ``y`` lie in the (closed) shadow."""
    return shadow_gauge(body, frame, y, tol_grad=tol_grad) <= 1.0 + tol_member


def _trace_one(body, frame, theta, tol_grad):
    d = np.array([math.cos(theta), math.sin(theta)])
    res = fiber_minimize(FiberQuery(body, frame, d), tol_grad=tol_grad)
    if not res.converged:
        raise ConvergenceError(
            f"fiber solve did not converge at theta={theta!r} "
            f"(|grad|={res.grad_norm:.3e} after {res.iterations} iterations)",
            result=res,
            theta=theta,
        )
    return d / res.t_star, res.w_star / res.t_star, res.grad_norm


def boundary_trace(
    body: ConvexBody,
    frame: OrthoFrame,
    n_samples: int,
    *,
    tol_grad: float = TOL_GRAD,
    workers: int | None = None,
) -> BoundaryPolyline:
    """Sample the boundary of a planar shadow at ``n_samples`` equal angles.

    The point at angle ``theta`` is ``d / shadow_gauge(d)`` with
    ``d = (cos theta, sin theta)``. With ``workers`` the angles are solved on
    a thread pool; results are merged by index, so the output is identical
    to the sequential run.
    """
    if frame.m != 2:
        raise ValidationError(f"boundary tracing needs a 2-dimensional subspace, got m={frame.m}")
    if int(n_samples) != n_samples or n_samples < 8:
        raise ValidationError(f"n_samples must be an integer >= 8, got {n_samples!r}")
    n_samples = int(n_samples)
    thetas = 2.0 * np.pi * np.arange(n_samples) / n_samples

    def job(theta):
        return _trace_one(body, frame, float(theta), tol_grad)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, thetas))
    else:
        rows = [job(t) for t in thetas]

    points = np.array([r[0] for r in rows])
    fiber = np.array([r[1] for r in rows]).reshape(n_samples, frame.fiber_dim)
    grads = np.array([r[2] for r in rows])
    return BoundaryPolyline(points=points, thetas=thetas, fiber_points=fiber, grad_norms=grads)
