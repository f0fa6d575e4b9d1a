"""Convex bodies described by their Minkowski gauge.

A body ``A`` with ``0`` in its interior is represented through
``mu_A(x) = inf{t > 0 : x in tA}``. Four constructible variants are
provided; all are immutable after construction and validated eagerly.

Example
-------
>>> ball = PNormBall(p=4.0, dim=3)
>>> round(gauge_eval(ball, [1.0, 1.0, 1.0]), 12)
1.316074012952
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import kernels
from .errors import DomainError, ValidationError

P_MIN_EXCLUSIVE = 1.0
P_MAX = 64.0
UNIT_TOL = 1e-12


def _as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.ascontiguousarray(np.asarray(x, dtype=np.float64).reshape(-1))
    if dim is not None and v.shape[0] != dim:
        raise ValidationError(f"expected a vector of length {dim}, got {v.shape[0]}")
    return v


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


class ConvexBody:
    """Common interface of all body variants.

    Subclasses implement ``gauge``, ``gradient``, ``support`` and
    ``gauge_many``. ``support`` is positively homogeneous and accepts any
    direction; the unit-norm check lives in :func:`support_function`.
    """

    dim: int

    def gauge(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def gauge_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.array([self.gauge(np.ascontiguousarray(row)) for row in X])

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class PNormBall(ConvexBody):
    """Unit ball of the p-norm, ``1 < p <= 64``."""

    p: float
    dim: int

    def __post_init__(self):
        p = float(self.p)
        if not (P_MIN_EXCLUSIVE < p <= P_MAX) or not math.isfinite(p):
            raise ValidationError(f"p must lie in (1, {P_MAX:g}], got {self.p!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValidationError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def dual_exponent(self) -> float:
        return self.p / (self.p - 1.0)

    def gauge(self, x):
        return float(kernels.pnorm_gauge(x, self.p))

    def gradient(self, x):
        return kernels.pnorm_grad(x, self.p)

    def support(self, u):
        return float(kernels.pnorm_gauge(u, self.dual_exponent))

    def gauge_many(self, X):
        return kernels.pnorm_gauge_rows(np.ascontiguousarray(X, dtype=np.float64), self.p)

    def to_dict(self):
        return {"kind": "pnorm_ball", "p": self.p, "dim": self.dim}


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexBody):
    """The set ``{x : x^T Q x <= 1}`` for symmetric positive-definite ``Q``."""

    Q: np.ndarray
    Qinv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] < 1:
            raise ValidationError(f"Q must be a square matrix, got shape {Q.shape}")
        scale = max(np.max(np.abs(Q)), np.finfo(float).tiny)
        if np.max(np.abs(Q - Q.T)) > 1e-12 * scale:
            raise ValidationError("Q is not symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q)[0] <= 0.0:
            raise ValidationError("Q is not positive definite")
        object.__setattr__(self, "Q", _frozen(Q))
        object.__setattr__(self, "Qinv", _frozen(np.linalg.inv(Q)))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    def gauge(self, x):
        return float(kernels.quad_gauge(x, self.Q))

    def gradient(self, x):
        return kernels.quad_grad(x, self.Q)

    def support(self, u):
        return float(kernels.quad_gauge(u, self.Qinv))

    def gauge_many(self, X):
        return kernels.quad_gauge_rows(np.ascontiguousarray(X, dtype=np.float64), self.Q)

    def to_dict(self):
        return {"kind": "ellipsoid", "Q": self.Q.tolist()}


@dataclass(frozen=True, eq=False)
class LinearImage(ConvexBody):
    """The set ``M @ inner`` for an invertible matrix ``M``."""

    M: np.ndarray
    inner: ConvexBody
    Minv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=np.float64)
        if M.ndim != 2 or M.shape != (self.inner.dim, self.inner.dim):
            raise ValidationError(
                f"M must be {self.inner.dim}x{self.inner.dim}, got shape {M.shape}"
            )
        if not np.all(np.isfinite(M)) or np.linalg.cond(M) > 1e12:
            raise ValidationError("M is singular or numerically ill-conditioned")
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "Minv", _frozen(np.linalg.inv(M)))

    @property
    def dim(self) -> int:
        return self.inner.dim

    def gauge(self, x):
        return self.inner.gauge(np.ascontiguousarray(self.Minv @ x))

    def gradient(self, x):
        return self.Minv.T @ self.inner.gradient(np.ascontiguousarray(self.Minv @ x))

    def support(self, u):
        return self.inner.support(np.ascontiguousarray(self.M.T @ u))

    def gauge_many(self, X):
        return self.inner.gauge_many(np.asarray(X) @ self.Minv.T)

    def to_dict(self):
        return {"kind": "linear_image", "M": self.M.tolist(), "inner": self.inner.to_dict()}


@dataclass(frozen=True, eq=False)
class Recentered(ConvexBody):
    """``inner - c``: the inner body with its gauge taken about ``c``.

    ``c`` must be interior to ``inner``. The gauge is found by bisection on
    the ray from ``c``; the gradient follows from implicit differentiation of
    ``mu_inner(c + x / t) = 1``.
    """

    c: np.ndarray
    inner: ConvexBody

    def __post_init__(self):
        c = _as_vector(self.c)
        if c.shape[0] != self.inner.dim:
            raise ValidationError(f"c must have length {self.inner.dim}, got {c.shape[0]}")
        if not self.inner.gauge(c) < 1.0:
            raise ValidationError("recentering point c is not interior to the inner body")
        object.__setattr__(self, "c", _frozen(c))

    @property
    def dim(self) -> int:
        return self.inner.dim

    def _ray_bracket(self, mu_x, mu_c, mu_negc):
        # mu(c + s x) <= mu(c) + s mu(x) and >= s mu(x) - mu(-c)
        return (1.0 - mu_c) / mu_x, (1.0 + mu_negc) / mu_x

    def _exit_scale(self, x):
        """Largest s with ``mu_inner(c + s x) <= 1``; x must be nonzero."""
        inner, c = self.inner, self.c
        lo, hi = self._ray_bracket(inner.gauge(x), inner.gauge(c), inner.gauge(np.ascontiguousarray(-c)))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if inner.gauge(np.ascontiguousarray(c + mid * x)) <= 1.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def gauge(self, x):
        if not np.any(x):
            return 0.0
        return 1.0 / self._exit_scale(x)

    def gradient(self, x):
        if not np.any(x):
            raise DomainError("gauge is not differentiable at the origin")
        s = self._exit_scale(x)
        g = self.inner.gradient(np.ascontiguousarray(self.c + s * x))
        # implicit derivative of 1/s where mu_inner(c + s x) = 1
        return g / (s * float(g @ x))

    def support(self, u):
        return self.inner.support(u) - float(self.c @ u)

    def gauge_many(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros(X.shape[0])
        nz = np.any(X != 0.0, axis=1)
        if not np.any(nz):
            return out
        Xn = X[nz]
        inner, c = self.inner, self.c
        mu_x = inner.gauge_many(Xn)
        lo, hi = self._ray_bracket(mu_x, inner.gauge(c), inner.gauge(np.ascontiguousarray(-c)))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            active = (mid > lo) & (mid < hi)
            if not np.any(active):
                break
            inside = inner.gauge_many(c + mid[:, None] * Xn) <= 1.0
            lo = np.where(active & inside, mid, lo)
            hi = np.where(active & ~inside, mid, hi)
        out[nz] = 2.0 / (lo + hi)
        return out

    def to_dict(self):
        return {"kind": "recentered", "c": self.c.tolist(), "inner": self.inner.to_dict()}


# --------------------------------------------------------------------------
# module-level operations
# --------------------------------------------------------------------------

def gauge_eval(body: ConvexBody, x) -> float:
    """Minkowski gauge of ``body`` at ``x`` (total; ``0`` at the origin)."""
    return body.gauge(_as_vector(x, body.dim))


def gauge_gradient(body: ConvexBody, x) -> np.ndarray:
    """Gradient of the gauge; raises :class:`DomainError` at the origin."""
    x = _as_vector(x, body.dim)
    if not np.any(x):
        raise DomainError("gauge is not differentiable at the origin")
    return np.asarray(body.gradient(x), dtype=np.float64)


def supporting_hyperplane_normal(body: ConvexBody, x) -> np.ndarray:
    """Unit normal of the supporting hyperplane through ``x / mu(x)``."""
    g = gauge_gradient(body, x)
    return g / np.linalg.norm(g)


def support_function(body: ConvexBody, u) -> float:
    """``sup <x|u>`` over the body, for a unit vector ``u``."""
    u = _as_vector(u, body.dim)
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise DomainError("support_function expects a unit direction")
    return body.support(u)


def boundary_point(body: ConvexBody, direction) -> np.ndarray:
    """The boundary point ``d / mu(d)`` on the ray through ``direction``."""
    d = _as_vector(direction, body.dim)
    if not np.any(d):
        raise DomainError("direction must be nonzero")
    return d / body.gauge(d)


def body_from_dict(data: dict[str, Any]) -> ConvexBody:
    """Build a body from its tagged-record description."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("body must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "pnorm_ball":
            return PNormBall(p=float(data["p"]), dim=int(data["dim"]))
        if kind == "ellipsoid":
            return Ellipsoid(Q=np.asarray(data["Q"], dtype=float))
        if kind == "linear_image":
            return LinearImage(M=np.asarray(data["M"], dtype=float), inner=body_from_dict(data["inner"]))
        if kind == "recentered":
            return Recentered(c=np.asarray(data["c"], dtype=float), inner=body_from_dict(data["inner"]))
    except KeyError as exc:
        raise ValidationError(f"body of kind {kind!r} is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed body of kind {kind!r}: {exc}") from None
    raise ValidationError(f"unknown body kind {kind!r}")
