"""Orthonormal frames for a subspace and its orthogonal complement."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import RankError, ValidationError

RANK_TOL = 1e-10
FRAME_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OrthoFrame:
    """Paired orthonormal bases: ``V`` (n x m) spans the subspace, ``W``
    (n x (n-m)) spans its orthogonal complement."""

    V: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=np.float64, ndmin=2, copy=True)
        n = V.shape[0]
        W = _columns(self.W, n)
        if V.shape[1] < 1:
            raise ValidationError("the subspace must be nonzero (m >= 1)")
        if V.shape[1] + W.shape[1] != n:
            raise ValidationError(f"bases have {V.shape[1]}+{W.shape[1]} columns for dimension {n}")
        B = np.hstack([V, W])
        if np.max(np.abs(B.T @ B - np.eye(n))) > FRAME_TOL:
            raise ValidationError("frame columns are not orthonormal")
        V.setflags(write=False)
        W.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "W", W)

    @property
    def dim(self) -> int:
        return self.V.shape[0]

    @property
    def m(self) -> int:
        return self.V.shape[1]

    @property
    def fiber_dim(self) -> int:
        return self.W.shape[1]


def _columns(a, n: int) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    if a.size == 0:
        return np.zeros((n, 0))
    return a.reshape(n, -1)


def _orthonormalize(vectors: np.ndarray, basis: list[np.ndarray]) -> list[np.ndarray]:
    """Modified Gram-Schmidt with one reorthogonalisation pass, appending to
    ``basis``. Raises :class:`RankError` on a dependent input."""
    out = list(basis)
    for k, a in enumerate(vectors):
        norm_a = np.linalg.norm(a)
        r = np.array(a, dtype=np.float64)
        for _ in range(2):
            for q in out:
                r -= (q @ r) * q
        nr = np.linalg.norm(r)
        if norm_a == 0.0 or nr < RANK_TOL * norm_a:
            raise RankError(f"vector {k} is linearly dependent on the preceding ones")
        out.append(r / nr)
    return out


def _complete(basis: list[np.ndarray], dim: int) -> list[np.ndarray]:
    """Extend ``basis`` to all of R^dim with standard-basis residuals.

    At each step every unused e_i is projected off the current basis and the
    largest residual wins (ties go to the lowest index).
    """
    out = list(basis)
    unused = list(range(dim))
    while len(out) < dim:
        best_i, best_r, best_n = -1, None, -1.0
        for i in unused:
            r = np.zeros(dim)
            r[i] = 1.0
            for _ in range(2):
                for q in out:
                    r -= (q @ r) * q
            nr = np.linalg.norm(r)
            if nr > best_n * (1.0 + 1e-12):
                best_i, best_r, best_n = i, r, nr
        unused.remove(best_i)
        out.append(best_r / best_n)
    return out


def _vectors(dim: int, vectors) -> np.ndarray:
    A = np.asarray(vectors, dtype=np.float64)
    if A.ndim == 1:
        A = A[None, :]
    if A.ndim != 2 or A.shape[1] != dim:
        raise ValidationError(f"expected vectors of length {dim}, got array of shape {A.shape}")
    if A.shape[0] == 0:
        raise ValidationError("at least one vector is required")
    return A


def frame_from_spanning(dim: int, spanning_vectors: Sequence[Sequence[float]]) -> OrthoFrame:
    """Frame whose ``V`` spans the given vectors (which must be independent)."""
    A = _vectors(dim, spanning_vectors)
    if A.shape[0] > dim:
        raise RankError(f"{A.shape[0]} vectors cannot be independent in dimension {dim}")
    V = _orthonormalize(A, [])
    full = _complete(V, dim)
    m = len(V)
    return OrthoFrame(np.array(full[:m]).T, _columns(np.array(full[m:]).T, dim))


def frame_from_normal(dim: int, normals: Sequence[Sequence[float]]) -> OrthoFrame:
    """Frame for the intersection of the hyperplanes orthogonal to ``normals``."""
    A = _vectors(dim, normals)
    if A.shape[0] >= dim:
        raise ValidationError("normals leave no nonzero subspace")
    comp = frame_from_spanning(dim, A)
    return OrthoFrame(comp.W, comp.V)


def frame_from_bases(V, W=None) -> OrthoFrame:
    """Frame from explicit orthonormal columns; ``W`` is completed if omitted."""
    V = np.array(V, dtype=np.float64, ndmin=2)
    if W is None:
        cols = [c for c in V.T]
        full = _complete(cols, V.shape[0])
        W = _columns(np.array(full[V.shape[1]:]).T, V.shape[0])
    return OrthoFrame(V, W)


def split(frame: OrthoFrame, x) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of ``x`` in the subspace and in its complement."""
    x = np.asarray(x, dtype=np.float64)
    return frame.V.T @ x, frame.W.T @ x


def assemble(frame: OrthoFrame, y, w) -> np.ndarray:
    """Inverse of :func:`split`."""
    x = frame.V @ np.asarray(y, dtype=np.float64)
    if frame.fiber_dim:
        x = x + frame.W @ np.asarray(w, dtype=np.float64)
    return x


def projector_matrix(frame: OrthoFrame) -> np.ndarray:
    """The m x n matrix taking ambient vectors to subspace coordinates.

    For an orthonormal frame this is ``V.T``; :func:`general_projector`
    covers arbitrary (non-orthonormal) bases.
    """
    return np.array(frame.V.T)


def general_projector(V_basis, Vperp_basis) -> np.ndarray:
    """``[I_m 0] [V Vperp]^{-1}`` for any bases of a subspace and its complement."""
    V_basis = np.asarray(V_basis, dtype=np.float64)
    Vperp_basis = _columns(Vperp_basis, V_basis.shape[0])
    m = V_basis.shape[1]
    n = V_basis.shape[0]
    B = np.hstack([V_basis, Vperp_basis])
    return np.hstack([np.eye(m), np.zeros((m, n - m))]) @ np.linalg.inv(B)


def frame_from_dict(dim: int, data: dict[str, Any]) -> OrthoFrame:
    """Build a frame from its tagged-record description.

    Kinds: ``span`` (``vectors``), ``normal`` (``normals``) and ``frame``
    (explicit orthonormal columns ``V`` and optional ``Vperp``, each given
    as a list of column vectors).
    """
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("subspace must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "span":
            return frame_from_spanning(dim, data["vectors"])
        if kind == "normal":
            return frame_from_normal(dim, data["normals"])
        if kind == "frame":
            V = np.asarray(data["V"], dtype=float).T
            W = data.get("Vperp")
            W = None if W is None else _columns(np.asarray(W, dtype=float).T, dim)
            if V.shape[0] != dim:
                raise ValidationError(f"frame vectors must have length {dim}")
            return frame_from_bases(V, W)
    except KeyError as exc:
        raise ValidationError(f"subspace of kind {kind!r} is missing field {exc}") from None
    raise ValidationError(f"unknown subspace kind {kind!r}")
