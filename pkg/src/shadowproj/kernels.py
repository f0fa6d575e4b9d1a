"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba (``*_nb``)
and a vectorised numpy version (``*_np``). The unsuffixed public names are
bound to one family at import time according to ``_accel.USE_NUMBA``; the
benchmark and the equivalence tests reach for both families directly.

All p-norm kernels rescale by the largest absolute coordinate before raising
to the power p, so exponents up to 64 do not overflow.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

SQRT2 = math.sqrt(2.0)


# --------------------------------------------------------------------------
# numba family
# --------------------------------------------------------------------------

@njit
def pnorm_gauge_nb(x, p):
    m = 0.0
    for i in range(x.shape[0]):
        a = abs(x[i])
        if a > m:
            m = a
    if m == 0.0:
        return 0.0
    s = 0.0
    for i in range(x.shape[0]):
        s += (abs(x[i]) / m) ** p
    return m * s ** (1.0 / p)


@njit
def pnorm_grad_nb(x, p):
    mu = pnorm_gauge_nb(x, p)
    g = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        r = abs(x[i]) / mu
        if r == 0.0:
            g[i] = 0.0
        elif x[i] > 0.0:
            g[i] = r ** (p - 1.0)
        else:
            g[i] = -(r ** (p - 1.0))
    return g


@njit
def pnorm_gauge_rows_nb(X, p):
    out = np.empty(X.shape[0])
    for k in range(X.shape[0]):
        out[k] = pnorm_gauge_nb(X[k], p)
    return out


@njit
def quad_gauge_nb(x, Q):
    n = x.shape[0]
    s = 0.0
    for i in range(n):
        qi = 0.0
        for j in range(n):
            qi += Q[i, j] * x[j]
        s += x[i] * qi
    if s <= 0.0:
        return 0.0
    return math.sqrt(s)


@njit
def quad_grad_nb(x, Q):
    mu = quad_gauge_nb(x, Q)
    n = x.shape[0]
    g = np.empty(n)
    for i in range(n):
        qi = 0.0
        for j in range(n):
            qi += Q[i, j] * x[j]
        g[i] = qi / mu
    return g


@njit
def quad_gauge_rows_nb(X, Q):
    out = np.empty(X.shape[0])
    for k in range(X.shape[0]):
        out[k] = quad_gauge_nb(X[k], Q)
    return out


@njit
def _real_cbrt_nb(a):
    if a >= 0.0:
        return a ** (1.0 / 3.0)
    return -((-a) ** (1.0 / 3.0))


@njit
def cardano_rows_nb(u, v):
    n = u.shape[0]
    out = np.empty((n, 5))
    for k in range(n):
        uu = u[k]
        vv = v[k]
        r2 = uu * uu + vv * vv
        b = vv * vv - 3.0 * uu * uu
        p = 3.0 * r2
        q = 0.5 * SQRT2 * vv * b
        disc = -(108.0 * r2 * r2 * r2 + 13.5 * vv * vv * b * b)
        delta = 0.125 * vv * vv * b * b + r2 * r2 * r2
        a = -0.25 * SQRT2 * vv * b
        sd = math.sqrt(delta)
        w = _real_cbrt_nb(a - sd) + _real_cbrt_nb(a + sd)
        out[k, 0] = p
        out[k, 1] = q
        out[k, 2] = disc
        out[k, 3] = delta
        out[k, 4] = w
    return out


# --------------------------------------------------------------------------
# numpy family
# --------------------------------------------------------------------------

def pnorm_gauge_np(x, p):
    m = np.max(np.abs(x)) if x.size else 0.0
    if m == 0.0:
        return 0.0
    return float(m * np.sum((np.abs(x) / m) ** p) ** (1.0 / p))


def pnorm_grad_np(x, p):
    mu = pnorm_gauge_np(x, p)
    return np.sign(x) * (np.abs(x) / mu) ** (p - 1.0)


def pnorm_gauge_rows_np(X, p):
    A = np.abs(X)
    m = A.max(axis=1)
    safe = np.where(m > 0.0, m, 1.0)
    s = np.sum((A / safe[:, None]) ** p, axis=1)
    return np.where(m > 0.0, m * s ** (1.0 / p), 0.0)


def quad_gauge_np(x, Q):
    s = float(x @ Q @ x)
    return math.sqrt(s) if s > 0.0 else 0.0


def quad_grad_np(x, Q):
    return (Q @ x) / quad_gauge_np(x, Q)


def quad_gauge_rows_np(X, Q):
    s = np.einsum("ij,jk,ik->i", X, Q, X)
    return np.sqrt(np.maximum(s, 0.0))


def _real_cbrt_np(a):
    return np.sign(a) * np.abs(a) ** (1.0 / 3.0)


def cardano_rows_np(u, v):
    r2 = u * u + v * v
    b = v * v - 3.0 * u * u
    p = 3.0 * r2
    q = 0.5 * SQRT2 * v * b
    disc = -(108.0 * r2**3 + 13.5 * v * v * b * b)
    delta = 0.125 * v * v * b * b + r2**3
    a = -0.25 * SQRT2 * v * b
    sd = np.sqrt(delta)
    w = _real_cbrt_np(a - sd) + _real_cbrt_np(a + sd)
    return np.stack([p, q, disc, delta, w], axis=1)


NUMBA_KERNELS = {
    "pnorm_gauge": pnorm_gauge_nb,
    "pnorm_grad": pnorm_grad_nb,
    "pnorm_gauge_rows": pnorm_gauge_rows_nb,
    "quad_gauge": quad_gauge_nb,
    "quad_grad": quad_grad_nb,
    "quad_gauge_rows": quad_gauge_rows_nb,
    "cardano_rows": cardano_rows_nb,
}

NUMPY_KERNELS = {
    "pnorm_gauge": pnorm_gauge_np,
    "pnorm_grad": pnorm_grad_np,
    "pnorm_gauge_rows": pnorm_gauge_rows_np,
    "quad_gauge": quad_gauge_np,
    "quad_grad": quad_grad_np,
    "quad_gauge_rows": quad_gauge_rows_np,
    "cardano_rows": cardano_rows_np,
}

_active = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS

pnorm_gauge = _active["pnorm_gauge"]
pnorm_grad = _active["pnorm_grad"]
pnorm_gauge_rows = _active["pnorm_gauge_rows"]
quad_gauge = _active["quad_gauge"]
quad_grad = _active["quad_grad"]
quad_gauge_rows = _active["quad_gauge_rows"]
cardano_rows = _active["cardano_rows"]
