"""Independent oracles for the shadow engine.

Nothing here calls the fiber Newton solver, with the exception of the
``*_vs_shadow`` cross-checks, which exist precisely to compare the two
sides and say so in their names.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc, norm

from .errors import DomainError, ValidationError
from .gauge_core import ConvexBody, Ellipsoid, PNormBall
from .shadow import BoundaryPolyline, FiberQuery, boundary_trace, fiber_minimize, shadow_gauge
from .subspace import OrthoFrame

SUPPORT_SLACK = 1e-9
_CHUNK = 1 << 16
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OracleReport:
    name: str
    max_abs_err: float
    max_rel_err: float
    n_samples: int
    passed: bool
    worst_case_input: list = field(default_factory=list)
    tolerance: float = float("nan")

    def row(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name:<28} {flag:<4}  n={self.n_samples:<6d} "
            f"abs={self.max_abs_err:.3e}  rel={self.max_rel_err:.3e}  tol={self.tolerance:.1e}"
        )


def _report(name, abs_errs, rel_errs, inputs, tol, use_rel=False) -> OracleReport:
    abs_errs = np.asarray(abs_errs, dtype=float)
    rel_errs = np.asarray(rel_errs, dtype=float)
    key = rel_errs if use_rel else abs_errs
    if key.size == 0:
        return OracleReport(name, 0.0, 0.0, 0, True, [], tol)
    i = int(np.argmax(key))
    worst = np.asarray(inputs[i], dtype=float).ravel().tolist()
    return OracleReport(
        name=name,
        max_abs_err=float(abs_errs.max()),
        max_rel_err=float(rel_errs.max()),
        n_samples=int(key.size),
        passed=bool(key.max() <= tol),
        worst_case_input=worst,
        tolerance=tol,
    )


# --------------------------------------------------------------------------
# primitive oracles
# --------------------------------------------------------------------------

def unit_directions(m: int, n_dirs: int, seed: int = 0) -> np.ndarray:
    """Unit vectors in R^m: an equal-angle grid for m=2, both signs for m=1
    and scrambled-Sobol points pushed onto the sphere for m>=3."""
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        th = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
        return np.column_stack([np.cos(th), np.sin(th)])
    pts = qmc.Sobol(d=m, scramble=True, seed=seed).random(n_dirs)
    g = norm.ppf(np.clip(pts, 1e-12, 1.0 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def support_membership_oracle(
    body: ConvexBody, frame: OrthoFrame, y, n_dirs: int = 4096, seed: int = 0
) -> bool:
    """Membership of ``y`` in the shadow via support values only.

    A point of the shadow satisfies ``<y|u> <= h_A(V u)`` for every unit
    ``u`` in the subspace. Testing finitely many directions can only accept
    too much, never reject a true member.
    """
    if n_dirs < 16:
        raise ValidationError("n_dirs must be at least 16")
    y = np.asarray(y, dtype=float).reshape(-1)
    U = unit_directions(frame.m, n_dirs, seed)
    for u in U:
        h = body.support(np.ascontiguousarray(frame.V @ u))
        if float(y @ u) > h + SUPPORT_SLACK:
            return False
    return True


def _eta_rows(body, frame, y, W_coords):
    X = (frame.V @ np.asarray(y, float))[None, :] + W_coords @ frame.W.T
    return body.gauge_many(X)


def _golden(f, a, b, tol=1e-12, max_iter=200):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def dense_fiber_scan(
    body: ConvexBody, frame: OrthoFrame, y, half_width: float = 3.0, step: float = 1e-4
) -> tuple[np.ndarray, float]:
    """Brute-force minimum of ``eta(y, .)`` on a fiber grid, then refined.

    1-D fibers get a golden-section search over the best cell's neighbours;
    2-D fibers get a Nelder-Mead polish from the best grid node.
    """
    k = frame.fiber_dim
    if k not in (1, 2):
        raise DomainError(f"dense scan supports fiber dimension 1 or 2, got {k}")
    if half_width < 1.0 or step > 1e-3:
        raise ValidationError("dense scan needs half_width >= 1 and step <= 1e-3")
    n = int(round(2.0 * half_width / step)) + 1
    grid = np.linspace(-half_width, half_width, n)
    y = np.asarray(y, dtype=float).reshape(-1)

    if k == 1:
        best_i, best_t = 0, np.inf
        for s in range(0, n, _CHUNK):
            vals = _eta_rows(body, frame, y, grid[s:s + _CHUNK, None])
            j = int(np.argmin(vals))
            if vals[j] < best_t:
                best_i, best_t = s + j, float(vals[j])
        if best_i in (0, n - 1):
            raise DomainError("minimum lies on the scan boundary; widen half_width")
        f = lambda w: float(body.gauge(np.ascontiguousarray(frame.V @ y + frame.W[:, 0] * w)))
        w, t = _golden(f, grid[best_i - 1], grid[best_i + 1])
        return np.array([w]), t

    best_ij, best_t = (0, 0), np.inf
    rows = max(1, _CHUNK // n)
    for i0 in range(0, n, rows):
        gi = grid[i0:i0 + rows]
        pts = np.column_stack([np.repeat(gi, n), np.tile(grid, gi.shape[0])])
        vals = _eta_rows(body, frame, y, pts)
        j = int(np.argmin(vals))
        if vals[j] < best_t:
            best_ij, best_t = (i0 + j // n, j % n), float(vals[j])
    if 0 in best_ij or n - 1 in best_ij:
        raise DomainError("minimum lies on the scan boundary; widen half_width")
    w0 = np.array([grid[best_ij[0]], grid[best_ij[1]]])
    f = lambda w: float(body.gauge(np.ascontiguousarray(frame.V @ y + frame.W @ w)))
    res = minimize(f, w0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000,
                            "initial_simplex": np.array([w0, w0 + [step, 0], w0 + [0, step]])})
    t = float(res.fun)
    if t > best_t:
        return w0, best_t
    return np.asarray(res.x), t


def ellipsoid_shadow_closed_form(Q, frame: OrthoFrame) -> np.ndarray:
    """Matrix ``S`` with shadow ``{y : y^T S y <= 1}``: the Schur complement
    of the complement block of ``Q`` written in frame coordinates."""
    Q = np.asarray(Q, dtype=float)
    Qvv = frame.V.T @ Q @ frame.V
    if frame.fiber_dim == 0:
        return Qvv
    Qvw = frame.V.T @ Q @ frame.W
    Qww = frame.W.T @ Q @ frame.W
    return Qvv - Qvw @ np.linalg.solve(Qww, Qvw.T)


def finite_difference_gradient(body: ConvexBody, x, step: float | None = None) -> np.ndarray:
    """Central differences of the gauge, one coordinate at a time."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if step is None:
        step = 1e-6 * max(1.0, float(np.linalg.norm(x)))
    g = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (body.gauge(np.ascontiguousarray(x + e)) - body.gauge(np.ascontiguousarray(x - e))) / (2 * step)
    return g


def _point_segment_distances(P, A, B):
    """Distance from each row of P to the closest of the segments A[j]-B[j]."""
    AB = B - A
    L2 = np.einsum("ij,ij->i", AB, AB)
    L2 = np.where(L2 > 0.0, L2, 1.0)
    out = np.empty(P.shape[0])
    for s in range(0, P.shape[0], 512):
        p = P[s:s + 512, None, :]
        t = np.clip(np.einsum("pjd,jd->pj", p - A[None], AB) / L2[None], 0.0, 1.0)
        proj = A[None] + t[..., None] * AB[None]
        out[s:s + 512] = np.sqrt(np.min(np.sum((p - proj) ** 2, axis=2), axis=1))
    return out


def polyline_hausdorff(a: BoundaryPolyline, b: BoundaryPolyline) -> float:
    """Symmetric Hausdorff distance between two closed polylines, measuring
    vertices of each against the segments of the other."""
    P, R = np.asarray(a.points, float), np.asarray(b.points, float)
    if len(P) < 8 or len(R) < 8:
        raise ValidationError("polylines need at least 8 points")
    d_ab = _point_segment_distances(P, R, np.roll(R, -1, axis=0)).max()
    d_ba = _point_segment_distances(R, P, np.roll(P, -1, axis=0)).max()
    return float(max(d_ab, d_ba))


# --------------------------------------------------------------------------
# cross-check reports
# --------------------------------------------------------------------------

def random_nonzero_points(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((n, dim)) * rng.uniform(0.1, 3.0, size=(n, 1))
    return X


def gradient_report(
    body: ConvexBody, n: int = 1000, seed: int = 0, tol: float = 1e-6, step: float | None = None
) -> OracleReport:
    rng = np.random.default_rng(seed)
    X = random_nonzero_points(body.dim, n, rng)
    abs_e, rel_e = [], []
    for x in X:
        g = body.gradient(np.ascontiguousarray(x))
        fd = finite_difference_gradient(body, x, step)
        e = float(np.linalg.norm(g - fd))
        abs_e.append(e)
        rel_e.append(e / float(np.linalg.norm(g)))
    return _report("gradient_vs_fd", abs_e, rel_e, X, tol, use_rel=True)


def euler_report(body: ConvexBody, n: int = 1000, seed: int = 0, tol: float = 1e-9) -> OracleReport:
    rng = np.random.default_rng(seed)
    X = random_nonzero_points(body.dim, n, rng)
    mu = body.gauge_many(X)
    dots = np.array([float(body.gradient(np.ascontiguousarray(x)) @ x) for x in X])
    err = np.abs(dots - mu)
    return _report("euler_identity", err, err / mu, X, tol, use_rel=True)


def gauge_axiom_report(body: ConvexBody, n: int = 10000, seed: int = 0) -> OracleReport:
    """Homogeneity and subadditivity, batched. Errors are normalised so that
    1.0 means exactly at tolerance."""
    rng = np.random.default_rng(seed)
    X1 = random_nonzero_points(body.dim, n, rng)
    X2 = random_nonzero_points(body.dim, n, rng)
    t = rng.uniform(0.0, 10.0, n)
    m1, m2 = body.gauge_many(X1), body.gauge_many(X2)
    hom = np.abs(body.gauge_many(X1 * t[:, None]) - t * m1) / (1e-10 * (1.0 + t * m1))
    sub = np.maximum(body.gauge_many(X1 + X2) - m1 - m2, 0.0) / 1e-10
    err = np.maximum(hom, sub)
    return _report("gauge_axioms", err, err, np.hstack([X1, X2]), 1.0)


def support_trace_report(
    body: ConvexBody,
    frame: OrthoFrame,
    n_samples: int = 2000,
    n_dirs: int = 4096,
    tol: float = 2e-6,
    polyline: BoundaryPolyline | None = None,
) -> OracleReport:
    """Support of the traced boundary vs the body's support, directions in V."""
    pl = polyline if polyline is not None else boundary_trace(body, frame, n_samples)
    U = unit_directions(2, n_dirs)
    traced = np.max(pl.points @ U.T, axis=0)
    exact = np.array([body.support(np.ascontiguousarray(frame.V @ u)) for u in U])
    err = np.abs(traced - exact)
    return _report("support_vs_trace", err, err / exact, U, tol)


def tangent_polygon(body: ConvexBody, frame: OrthoFrame, poly: BoundaryPolyline) -> np.ndarray:
    """Vertices of the circumscribed polygon formed by the shadow's tangent
    lines at the traced points.

    At a traced point the lifted body point has a gradient orthogonal to the
    fiber, so ``V^T grad mu_A`` is the outward normal of the shadow there.
    """
    P = poly.points
    N = np.array([
        frame.V.T @ body.gradient(np.ascontiguousarray(frame.V @ p + frame.W @ w))
        for p, w in zip(P, poly.fiber_points)
    ])
    b = np.einsum("ij,ij->i", N, P)
    N2, b2 = np.roll(N, -1, axis=0), np.roll(b, -1)
    det = N[:, 0] * N2[:, 1] - N[:, 1] * N2[:, 0]
    qx = (b * N2[:, 1] - b2 * N[:, 1]) / det
    qy = (N[:, 0] * b2 - N2[:, 0] * b) / det
    return np.column_stack([qx, qy])


def support_sandwich_report(
    body: ConvexBody,
    frame: OrthoFrame,
    n_samples: int = 2000,
    n_dirs: int = 4096,
    tol: float = 1e-9,
    polyline: BoundaryPolyline | None = None,
) -> OracleReport:
    """The body's support along directions of V must lie between the support
    of the inscribed (traced) polygon and of the tangent polygon.

    Unlike :func:`support_trace_report` this has no sampling error, so the
    tolerance only absorbs rounding.
    """
    pl = polyline if polyline is not None else boundary_trace(body, frame, n_samples)
    U = unit_directions(2, n_dirs)
    inner = np.max(pl.points @ U.T, axis=0)
    outer = np.max(tangent_polygon(body, frame, pl) @ U.T, axis=0)
    exact = np.array([body.support(np.ascontiguousarray(frame.V @ u)) for u in U])
    err = np.maximum(np.maximum(inner - exact, exact - outer), 0.0)
    return _report("support_sandwich", err, err / exact, U, tol)


def dense_scan_vs_shadow(
    body: ConvexBody, frame: OrthoFrame, n: int = 200, seed: int = 0, tol: float = 1e-9,
    half_width: float = 3.0, step: float = 1e-4,
) -> OracleReport:
    rng = np.random.default_rng(seed)
    Y = rng.standard_normal((n, frame.m))
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    Y *= rng.uniform(0.2, 1.0, size=(n, 1))
    abs_e, rel_e = [], []
    for y in Y:
        _, t_scan = dense_fiber_scan(body, frame, y, half_width, step)
        t = shadow_gauge(body, frame, y)
        abs_e.append(abs(t - t_scan))
        rel_e.append(abs(t - t_scan) / t_scan)
    return _report("dense_scan_vs_shadow", abs_e, rel_e, Y, tol)


def schur_vs_shadow(
    body: Ellipsoid, frame: OrthoFrame, n_dirs: int = 100, seed: int = 0, tol: float = 1e-8
) -> OracleReport:
    S = ellipsoid_shadow_closed_form(body.Q, frame)
    rng = np.random.default_rng(seed)
    Y = rng.standard_normal((n_dirs, frame.m))
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    abs_e, rel_e = [], []
    for y in Y:
        exact = math.sqrt(float(y @ S @ y))
        t = shadow_gauge(body, frame, y)
        abs_e.append(abs(t - exact))
        rel_e.append(abs(t - exact) / exact)
    return _report("schur_vs_shadow", abs_e, rel_e, Y, tol, use_rel=True)


def is_quartic_plane_problem(body: ConvexBody, frame: OrthoFrame) -> bool:
    if not isinstance(body, PNormBall) or body.dim != 3 or body.p != 4.0 or frame.m != 2:
        return False
    n = np.ones(3) / math.sqrt(3.0)
    return float(np.max(np.abs(frame.V.T @ n))) < 1e-12


def cardano_vs_shadow(
    body: ConvexBody, frame: OrthoFrame, n: int = 1000, seed: int = 0, tol: float = 1e-8
) -> OracleReport:
    """Closed-form root and gauge vs the fiber solver, on random ``(u, v)``.

    The error recorded per sample is the larger of the fiber-point
    discrepancy and the gauge discrepancy; both are compared in ambient
    coordinates so any frame of the plane works.
    """
    from .quartic_plane import analytic_eta, cubic_solve, uvw_basis

    B = uvw_basis()
    rng = np.random.default_rng(seed)
    UV = rng.uniform(-2.0, 2.0, size=(n, 2))
    abs_e, rel_e = [], []
    for u, v in UV:
        sol = cubic_solve(u, v)
        t_exact = float(analytic_eta(u, v, sol.w_star))
        amb_exact = B @ np.array([u, v, sol.w_star])
        y = frame.V.T @ (B[:, :2] @ np.array([u, v]))
        res = fiber_minimize(FiberQuery(body, frame, y))
        amb_num = frame.V @ y + frame.W @ res.w_star
        e = max(float(np.linalg.norm(amb_num - amb_exact)), abs(res.t_star - t_exact) / t_exact)
        abs_e.append(e)
        rel_e.append(e / max(1.0, math.hypot(u, v)))
    return _report("cardano_vs_shadow", abs_e, rel_e, UV, tol)


def run_suite(
    body: ConvexBody, frame: OrthoFrame, seed: int = 0, quick: bool = True, fd_step: float | None = None
) -> list[OracleReport]:
    """Every oracle that applies to this body/frame pair."""
    n = 200 if quick else 1000
    reports = [
        gradient_report(body, n=n, seed=seed, step=fd_step),
        euler_report(body, n=n, seed=seed),
        gauge_axiom_report(body, n=10 * n, seed=seed),
    ]
    if frame.m == 2:
        reports.append(support_sandwich_report(body, frame, n_samples=2000))
    if frame.fiber_dim in (1, 2):
        hw, st = (3.0, 1e-4) if frame.fiber_dim == 1 else (2.0, 1e-3)
        reports.append(dense_scan_vs_shadow(body, frame, n=20 if quick else 200, seed=seed,
                                            half_width=hw, step=st))
    if isinstance(body, Ellipsoid):
        reports.append(schur_vs_shadow(body, frame, seed=seed))
    if is_quartic_plane_problem(body, frame):
        reports.append(cardano_vs_shadow(body, frame, n=n, seed=seed))
    return reports
