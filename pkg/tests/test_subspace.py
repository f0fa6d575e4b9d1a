import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shadowproj.errors import RankError, ValidationError
from shadowproj.quartic_plane import uvw_basis
from shadowproj.subspace import (
    OrthoFrame,
    assemble,
    frame_from_bases,
    frame_from_dict,
    frame_from_normal,
    frame_from_spanning,
    general_projector,
    projector_matrix,
    split,
)

from conftest import random_frame


def check_frame(f: OrthoFrame):
    n, m = f.dim, f.m
    assert np.max(np.abs(f.V.T @ f.V - np.eye(m))) <= 1e-12
    if n > m:
        assert np.max(np.abs(f.W.T @ f.W - np.eye(n - m))) <= 1e-12
        assert np.max(np.abs(f.V.T @ f.W)) <= 1e-12
    assert np.max(np.abs(f.V @ f.V.T + f.W @ f.W.T - np.eye(n))) <= 1e-12


def test_frame_from_normal_plane():
    f = frame_from_normal(3, [[1, 1, 1]])
    check_frame(f)
    assert f.m == 2
    np.testing.assert_allclose(f.V.T @ np.ones(3), 0, atol=1e-15)
    # the (u, v) basis spans the same plane
    B = uvw_basis()
    np.testing.assert_allclose(f.V @ f.V.T, B[:, :2] @ B[:, :2].T, atol=1e-15)


def test_frame_from_normal_complement_rule():
    # residual ordering with index tie-break gives e1's residual first
    f = frame_from_normal(3, [[1, 1, 1]])
    np.testing.assert_allclose(f.V[:, 0], [math.sqrt(2 / 3), -1 / math.sqrt(6), -1 / math.sqrt(6)], atol=1e-15)
    np.testing.assert_allclose(f.V[:, 1], [0, 1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-15)


def test_full_space_and_axis_frames():
    f = frame_from_spanning(2, [[1, 0], [0, 1]])
    check_frame(f)
    assert f.fiber_dim == 0 and f.W.shape == (2, 0)
    g = frame_from_normal(2, [[0, 1]])
    np.testing.assert_allclose(np.abs(g.V[:, 0]), [1, 0])


@pytest.mark.parametrize("build,vectors", [
    (frame_from_spanning, [[1, 0, 0], [2, 0, 0]]),
    (frame_from_normal, [[1, 0, 0], [1, 0, 0]]),
    (frame_from_spanning, [[0, 0, 0]]),
])
def test_rank_errors(build, vectors):
    with pytest.raises(RankError):
        build(3, vectors)


def test_nearly_dependent_vectors_rejected():
    with pytest.raises(RankError):
        frame_from_spanning(3, [[1, 0, 0], [1, 1e-12, 0]])


def test_invalid_frames_rejected():
    with pytest.raises(ValidationError):
        frame_from_normal(2, [[1, 0], [0, 1]])
    with pytest.raises(ValidationError):
        OrthoFrame(np.array([[1.0], [1.0]]), np.array([[0.0], [1.0]]))
    with pytest.raises(ValidationError):
        frame_from_spanning(3, [[1, 0]])


def test_split_examples():
    f = frame_from_normal(2, [[0, 1]])
    y, w = split(f, [3, 4])
    assert abs(y[0]) == pytest.approx(3) and abs(w[0]) == pytest.approx(4)
    y, w = split(f, [0, 0])
    assert not y.any() and not w.any()
    B = uvw_basis()
    g = frame_from_bases(B[:, :2], B[:, 2:])
    y, w = split(g, [1, 1, 1])
    np.testing.assert_allclose(y, [0, 0], atol=1e-15)
    np.testing.assert_allclose(w, [math.sqrt(3)], rtol=1e-15)


def test_projector_examples():
    f = frame_from_spanning(2, [[1, 0]])
    np.testing.assert_allclose(projector_matrix(f), [[1, 0]])
    B = uvw_basis()
    g = frame_from_bases(B[:, :2], B[:, 2:])
    np.testing.assert_allclose(projector_matrix(g), B.T[:2], atol=1e-15)


@given(seed=st.integers(0, 10_000), n=st.integers(2, 6), data=st.data())
def test_frame_properties(seed, n, data):
    m = data.draw(st.integers(1, n))
    rng = np.random.default_rng(seed)
    f = random_frame(rng, n, m)
    check_frame(f)
    P = projector_matrix(f)
    assert np.max(np.abs(P @ f.V - np.eye(m))) <= 1e-12
    x = rng.standard_normal(n) * 10
    y, w = split(f, x)
    np.testing.assert_allclose(assemble(f, y, w), x, rtol=1e-12, atol=1e-12 * np.linalg.norm(x))
    np.testing.assert_allclose(P @ x, y, atol=1e-12 * np.linalg.norm(x))
    assert np.linalg.norm(y) <= np.linalg.norm(x) * (1 + 1e-15)
    E = f.V @ P
    np.testing.assert_allclose(E @ E, E, atol=1e-12)


def test_general_projector_formula_reproduced():
    # arbitrary (non-orthonormal) bases of a plane and its complement
    rng = np.random.default_rng(4)
    Vb = rng.standard_normal((4, 2))
    Q, _ = np.linalg.qr(np.hstack([Vb, rng.standard_normal((4, 2))]))
    Wb = Q[:, 2:] @ np.array([[2.0, 0.3], [0.1, 1.5]])
    P = general_projector(Vb, Wb)
    x = rng.standard_normal(4)
    coeffs = np.linalg.solve(np.hstack([Vb, Wb]), x)
    np.testing.assert_allclose(P @ x, coeffs[:2], rtol=1e-12)
    # with orthonormal columns it collapses to V^T
    f = frame_from_spanning(4, Vb.T)
    np.testing.assert_allclose(general_projector(f.V, f.W), projector_matrix(f), atol=1e-14)


def test_determinism():
    vecs = np.random.default_rng(1).standard_normal((2, 5))
    a, b = frame_from_spanning(5, vecs), frame_from_spanning(5, vecs.copy())
    assert a.V.tobytes() == b.V.tobytes() and a.W.tobytes() == b.W.tobytes()


def test_frame_from_dict_kinds():
    f = frame_from_dict(3, {"kind": "span", "vectors": [[1, 0, 0], [0, 1, 0]]})
    assert f.m == 2
    g = frame_from_dict(3, {"kind": "normal", "normals": [[0, 0, 1]]})
    assert g.m == 2
    B = uvw_basis()
    h = frame_from_dict(3, {"kind": "frame", "V": B[:, :2].T.tolist()})
    np.testing.assert_allclose(h.V, B[:, :2])
    np.testing.assert_allclose(np.abs(h.W[:, 0]), B[:, 2], atol=1e-15)
    with pytest.raises(ValidationError):
        frame_from_dict(3, {"kind": "affine"})
    with pytest.raises(ValidationError):
        frame_from_dict(3, {"kind": "span"})
