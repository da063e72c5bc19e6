import numpy as np
import pytest

from ccopkit import Tolerances, rank_and_nullbasis, restricted_inertia, solve_multipliers

TOL = Tolerances()


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(tol_feas=0.0)
    with pytest.raises(ValueError):
        Tolerances(tol_rank=1e-6, tol_strict=1e-8)
    t = Tolerances(tol_act=1e-7)
    assert t.tol_act == 1e-7 and t.tol_feas == 1e-9


def test_rank_identity_has_empty_nullspace():
    rank, basis = rank_and_nullbasis(np.eye(2), TOL)
    assert rank == 2
    assert basis.shape == (2, 0)


def test_rank_one_row_nullvector_direction():
    rank, basis = rank_and_nullbasis(np.array([[1.0, 1.0]]), TOL)
    assert rank == 1
    assert basis.shape == (2, 1)
    v = basis[:, 0]
    expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
    assert np.allclose(v, expected, atol=1e-12) or np.allclose(v, -expected, atol=1e-12)


def test_rank_coordinate_rows():
    rank, basis = rank_and_nullbasis(np.array([[1.0, 0.0], [0.0, 1.0]]), TOL)
    assert rank == 2 and basis.shape == (2, 0)


def test_rank_of_zero_and_empty_matrices():
    assert rank_and_nullbasis(np.zeros((2, 3)), TOL)[0] == 0
    rank, basis = rank_and_nullbasis(np.zeros((0, 3)), TOL)
    assert rank == 0 and basis.shape == (3, 3)


def test_nullbasis_properties_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = int(rng.integers(1, 6))
        k = int(rng.integers(1, 6))
        r = int(rng.integers(0, min(m, k) + 1))
        A = rng.standard_normal((m, r)) @ rng.standard_normal((r, k))
        rank, basis = rank_and_nullbasis(A, TOL)
        smax = np.linalg.svd(A, compute_uv=False)[0] if min(A.shape) else 0.0
        if basis.shape[1] and smax > 0.0:
            assert np.max(np.abs(A @ basis)) <= 10 * TOL.tol_rank * smax
            assert np.allclose(basis.T @ basis, np.eye(basis.shape[1]), atol=1e-12)


def test_solve_multipliers_examples():
    G = np.array([[1.0, 0.0], [0.0, 1.0]])
    coeffs, res = solve_multipliers(G, np.array([-2.0, 0.0]), TOL)
    assert np.allclose(coeffs, [-2.0, 0.0], atol=1e-12) and res <= 1e-12

    coeffs, res = solve_multipliers(np.array([[1.0], [0.0]]), np.array([0.0, 1.0]), TOL)
    assert np.allclose(coeffs, [0.0], atol=1e-12) and abs(res - 1.0) <= 1e-12

    coeffs, res = solve_multipliers(G, np.array([-2.0, -2.0]), TOL)
    assert np.allclose(coeffs, [-2.0, -2.0], atol=1e-12) and res <= 1e-12


def test_solve_multipliers_empty_columns():
    coeffs, res = solve_multipliers(np.zeros((3, 0)), np.array([3.0, 0.0, 4.0]), TOL)
    assert coeffs.size == 0 and abs(res - 5.0) <= 1e-12


def test_residual_equals_distance_to_range():
    rng = np.random.default_rng(5)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        k = int(rng.integers(1, d + 1))
        G = rng.standard_normal((d, k))
        target = rng.standard_normal(d)
        _, res = solve_multipliers(G, target, TOL)
        # independent projector onto range(G)
        Q, _ = np.linalg.qr(G)
        distance = np.linalg.norm(target - Q @ (Q.T @ target))
        assert abs(res - distance) <= 1e-10


def test_restricted_inertia_examples():
    assert restricted_inertia(np.diag([2.0, 2.0]), np.array([[1.0], [0.0]]), TOL) == (0, 0, 1)
    assert restricted_inertia(np.diag([5.0, -1.0]), np.zeros((2, 0)), TOL) == (0, 0, 0)
    assert restricted_inertia(np.diag([-1.0, 3.0]), np.eye(2), TOL) == (1, 0, 1)


def test_restricted_inertia_zero_band_counts_as_degenerate():
    H = np.diag([1e-12, 1.0])
    assert restricted_inertia(H, np.eye(2), TOL) == (0, 1, 1)


def test_inertia_invariant_under_orthonormal_rebase():
    rng = np.random.default_rng(9)
    for _ in range(60):
        d = int(rng.integers(2, 8))
        r = int(rng.integers(1, d + 1))
        H = rng.standard_normal((d, d))
        H = H + H.T
        N = np.linalg.qr(rng.standard_normal((d, r)))[0]
        Q = np.linalg.qr(rng.standard_normal((r, r)))[0]
        assert restricted_inertia(H, N, TOL) == restricted_inertia(H, N @ Q, TOL)
