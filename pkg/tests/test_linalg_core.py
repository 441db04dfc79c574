import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylkit.errors import InvalidShape, NotHermitian
from weylkit.linalg_core import (
    BoundaryParam,
    as_matrix,
    conjugate_by_W,
    matrix_from_json,
    matrix_to_json,
    min_imag_eigenvalue,
    random_boundary_param,
    structure_matrices,
    validate_boundary_param,
)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_structure_matrices(m):
    sm = structure_matrices(m)
    I2 = np.eye(2 * m)
    assert np.array_equal(sm.J @ sm.J, -I2)
    assert np.allclose(sm.W.conj().T @ sm.W, I2, atol=1e-15)
    assert np.allclose(sm.W @ sm.W.conj().T, I2, atol=1e-15)
    assert np.allclose(-sm.W.conj().T @ sm.J @ sm.W, 1j * sm.S3, atol=1e-15)
    allowed = {0.0, 1 / np.sqrt(2), -1 / np.sqrt(2)}
    assert all(min(abs(v - a) for a in allowed) < 1e-15 for v in np.r_[sm.W.real.ravel(), sm.W.imag.ravel()])


@pytest.mark.parametrize("m", [1, 3])
def test_validate_examples(m):
    I, Z = np.eye(m), np.zeros((m, m))
    ok, rep = validate_boundary_param(BoundaryParam(I, Z))
    assert ok and max(rep.values()) == 0
    ok, _ = validate_boundary_param(BoundaryParam(I / np.sqrt(2), I / np.sqrt(2)))
    assert ok
    ok, rep = validate_boundary_param(BoundaryParam(I, I))
    assert not ok
    assert rep["orthonormal"] == pytest.approx(1.0)  # ||2I - I||


def test_shape_mismatch():
    with pytest.raises(InvalidShape):
        BoundaryParam(np.eye(2), np.eye(3))


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_random_params_dual_identities(m, seed):
    a = random_boundary_param(m, np.random.default_rng(seed))
    ok, rep = validate_boundary_param(a)
    assert ok
    assert rep["dual_orthonormal"] < 1e-12 and rep["dual_lagrangian"] < 1e-12
    # alpha* alpha J + J alpha* alpha = J
    J = structure_matrices(m).J
    A = a.alpha.conj().T @ a.alpha
    assert np.linalg.norm(A @ J + J @ A - J) < 1e-12
    # initial fundamental matrix is unitary and J-unitary
    P = a.initial_fundamental()
    assert np.allclose(P.conj().T @ P, np.eye(2 * m), atol=1e-12)
    assert np.allclose(P.conj().T @ J @ P, J, atol=1e-12)


def test_conjugate_by_W_examples():
    S, V = conjugate_by_W(np.zeros((2, 2)))
    assert np.allclose(S, 1j * structure_matrices(2).S3) and np.allclose(V, 0)
    # with W = [[-i, i], [1, 1]]/sqrt 2 the off-diagonal block is Q = -i phi
    _, V = conjugate_by_W(np.array([[1.0]]))
    assert np.allclose(V, [[0, -1j], [1j, 0]])
    _, V = conjugate_by_W(np.diag([1.0, -1.0]))
    assert np.allclose(V[:2, 2:], np.diag([-1j, 1j]))
    assert np.allclose(V[2:, :2], V[:2, 2:].conj().T)


def test_conjugate_by_W_general(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    phi = A + A.conj().T
    _, V = conjugate_by_W(phi)
    assert np.allclose(V[:3, :3], 0, atol=1e-14) and np.allclose(V[3:, 3:], 0, atol=1e-14)
    assert np.allclose(V[:3, 3:], -1j * phi)


def test_conjugate_by_W_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        conjugate_by_W(np.array([[0, 1], [0, 0]]))


def test_min_imag_eigenvalue():
    assert min_imag_eigenvalue(1j * np.eye(3)) == pytest.approx(1.0)
    assert min_imag_eigenvalue(np.eye(2)) == pytest.approx(0.0, abs=1e-15)
    assert min_imag_eigenvalue(np.array([[1j, 1], [0, 1j]])) == pytest.approx(0.5)
    stack = np.array([1j * np.eye(2), 2j * np.eye(2)])
    assert np.allclose(min_imag_eigenvalue(stack), [1, 2])
    with pytest.raises(InvalidShape):
        min_imag_eigenvalue(np.ones((2, 3)))


def test_json_round_trip(rng):
    M = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    obj = matrix_to_json(M)
    assert obj["rows"] == 2 and obj["cols"] == 3 and len(obj["re"]) == 6
    assert np.array_equal(matrix_from_json(obj), M)
    with pytest.raises(InvalidShape):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})
    a = random_boundary_param(2, rng)
    b = BoundaryParam.from_json(a.to_json())
    assert np.array_equal(a.alpha, b.alpha)


def test_as_matrix():
    assert np.array_equal(as_matrix(2.0, 3), 2 * np.eye(3))
    assert as_matrix([[1, 2], [3, 4]]).shape == (2, 2)
    assert as_matrix([1, 2, 3, 4], 2).shape == (2, 2)
