import numpy as np
import pytest

from ckylab.numerics import (canonical_nullspace, column_space, fix_signs,
                             max_principal_angle_sin, nullspace,
                             orthonormalize, projection_residual, spd_sqrt_pair,
                             svd_rank)


def test_svd_rank_basic():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    rank, gap = svd_rank(A, 1e-10)
    assert rank == 1
    assert gap == np.inf or gap > 1e10  # second singular value is exactly 0


def test_nullspace_shapes_and_residual():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    basis, rank, gap = nullspace(A, 1e-10)
    assert rank == 2
    assert basis.shape == (3, 1)
    assert np.max(np.abs(A @ basis)) < 1e-14
    np.testing.assert_allclose(basis[:, 0] @ basis[:, 0], 1.0)


def test_nullspace_zero_matrix():
    basis, rank, gap = nullspace(np.zeros((4, 3)), 1e-10)
    assert rank == 0
    assert basis.shape == (3, 3)
    np.testing.assert_allclose(basis, np.eye(3))


def test_column_space():
    A = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]])
    basis, rank, _ = column_space(A, 1e-10)
    assert rank == 1
    assert basis.shape == (3, 1)
    assert abs(basis[1, 0]) < 1e-14


def test_orthonormalize_in_inner_product():
    rng = np.random.default_rng(3)
    G = np.diag([1.0, 4.0, 9.0])
    V = rng.normal(size=(3, 3))
    Q = orthonormalize(V, inner=G)
    np.testing.assert_allclose(Q.T @ G @ Q, np.eye(3), atol=1e-12)


def test_orthonormalize_drops_dependent_columns():
    V = np.array([[1.0, 2.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    Q = orthonormalize(V)
    assert Q.shape == (3, 2)


def test_fix_signs_leading_entry_positive():
    B = np.array([[-1.0, 0.0], [2.0, -3.0]])
    F = fix_signs(B)
    assert F[0, 0] > 0
    assert F[1, 1] > 0  # second column led by -3


def test_canonical_nullspace_is_deterministic_and_basis_independent():
    # same kernel presented through different row scalings / orderings
    A = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, -1.0]])
    B = np.array([[0.0, 0.0, -2.0, 2.0], [3.0, 3.0, 0.0, 0.0],
                  [3.0, 3.0, -2.0, 2.0]])
    na, ra, _ = canonical_nullspace(A, inner=np.eye(4), rank_rel=1e-10)
    nb, rb, _ = canonical_nullspace(B, inner=np.eye(4), rank_rel=1e-10)
    assert ra == rb == 2
    np.testing.assert_allclose(na, nb, atol=1e-12)


def test_canonical_nullspace_respects_inner():
    A = np.array([[1.0, 0.0, 0.0]])
    G = np.diag([1.0, 1.0, 25.0])
    basis, _, _ = canonical_nullspace(A, inner=G, rank_rel=1e-10)
    np.testing.assert_allclose(basis.T @ G @ basis, np.eye(2), atol=1e-12)


def test_max_principal_angle_sin():
    a = np.eye(3)[:, :2]
    b = np.eye(3)[:, :2]
    assert max_principal_angle_sin(a, b) < 1e-14
    c = np.eye(3)[:, 1:]
    assert max_principal_angle_sin(a, c) == pytest.approx(1.0)


def test_projection_residual():
    basis = np.eye(3)[:, :2]
    assert projection_residual(np.array([1.0, 1.0, 0.0]), basis) < 1e-15
    assert projection_residual(np.array([0.0, 0.0, 2.0]), basis) == pytest.approx(1.0)
    assert projection_residual(np.zeros(3), basis) == 0.0


def test_spd_sqrt_pair():
    rng = np.random.default_rng(5)
    M = rng.normal(size=(4, 4))
    G = M @ M.T + 4.0 * np.eye(4)
    inv_root, root = spd_sqrt_pair(G)
    np.testing.assert_allclose(root @ root, G, atol=1e-11)
    np.testing.assert_allclose(root @ inv_root, np.eye(4), atol=1e-12)
