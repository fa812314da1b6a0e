import math

import numpy as np
import pytest

from rabicav import BlockIndex, analytic_eigensystem, numeric_eigensystem, omega_matrix
from rabicav.dressed import (ConvergenceError, NotSymmetricError,
                             eigenspace_projector, jacobi_eigh)


def test_block_index_validation():
    BlockIndex(0, 1)
    BlockIndex(5, 5)
    with pytest.raises(ValueError):
        BlockIndex(-1, 4)
    with pytest.raises(ValueError):
        BlockIndex(5, 4)
    with pytest.raises(ValueError):
        BlockIndex(0, 0)


def test_omega_matrix_s1_explicit():
    h = omega_matrix(BlockIndex(1, 4), omega=1.0, q_bare=0.5)
    expected = np.array([[0.5, 0.25, 0.0],
                         [0.25, 0.5, 0.0],
                         [0.0, 0.0, -0.5]])
    np.testing.assert_allclose(h, expected, atol=0.0)


def test_omega_matrix_s0_diagonal():
    for n in (1, 7, 100):
        h = omega_matrix(BlockIndex(0, n), omega=3.0, q_bare=2.0)
        np.testing.assert_allclose(h, np.diag([1.5, -1.5]), atol=0.0)


def test_omega_matrix_eigenvalues_match_analytic_set():
    idx = BlockIndex(3, 10)
    h = omega_matrix(idx, omega=2.0, q_bare=1.3)
    numeric, _ = numeric_eigensystem(h)
    block = analytic_eigensystem(idx, 2.0, 1.3)
    np.testing.assert_allclose(np.sort(numeric), np.sort(block.eigenvalues),
                               atol=1e-12)


def test_analytic_eigenvalues_closed_form():
    for s, n in [(1, 1), (2, 5), (7, 7), (12, 24)]:
        block = analytic_eigensystem(BlockIndex(s, n), omega=2.0, q_bare=1.1)
        q_eff = 1.1 * math.sqrt(s / n)
        assert block.omega_plus == pytest.approx(1.0 + q_eff, rel=1e-12)
        assert block.omega_minus == pytest.approx(1.0 - q_eff, rel=1e-12)
        assert block.omega_zero == -1.0
        assert np.sum(np.abs(block.eigenvalues - 1.0) < 1e-12) == max(s - 1, 0)


def test_analytic_s_equals_n():
    block = analytic_eigensystem(BlockIndex(4, 4), omega=10.0, q_bare=1.0)
    assert block.omega_plus == pytest.approx(6.0, rel=1e-14)
    assert block.omega_minus == pytest.approx(4.0, rel=1e-14)


def test_eigenvector_structure():
    block = analytic_eigensystem(BlockIndex(5, 9), omega=1.0, q_bare=0.7)
    v = block.vectors
    # Orthonormality.
    np.testing.assert_allclose(v.T @ v, np.eye(7), atol=1e-12)
    # plus/minus: +-1/sqrt(2) on the excited state, 1/sqrt(2s) per photon slot.
    assert block.plus_vector[0] == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert block.minus_vector[0] == pytest.approx(-1 / math.sqrt(2), rel=1e-14)
    np.testing.assert_allclose(block.plus_vector[1:6], 1 / math.sqrt(10),
                               rtol=1e-14)
    np.testing.assert_allclose(block.minus_vector[1:6], 1 / math.sqrt(10),
                               rtol=1e-14)
    assert block.zero_vector[-1] == 1.0


def test_first_dark_vector_is_pair_difference():
    block = analytic_eigensystem(BlockIndex(2, 6), omega=1.0, q_bare=0.4)
    expected = np.zeros(4)
    expected[1] = 1 / math.sqrt(2)
    expected[2] = -1 / math.sqrt(2)
    np.testing.assert_allclose(block.dark_vectors[:, 0], expected, atol=1e-15)


def test_s0_block_identity_vectors():
    block = analytic_eigensystem(BlockIndex(0, 3), omega=4.0, q_bare=9.0)
    np.testing.assert_allclose(block.vectors, np.eye(2), atol=0.0)
    np.testing.assert_allclose(block.eigenvalues, [2.0, -2.0], atol=0.0)


def test_analytic_residuals():
    for s, n in [(1, 2), (4, 4), (9, 20)]:
        idx = BlockIndex(s, n)
        h = omega_matrix(idx, 3.0, 0.8)
        block = analytic_eigensystem(idx, 3.0, 0.8)
        resid = h @ block.vectors - block.vectors * block.eigenvalues
        assert np.max(np.abs(resid)) <= 1e-10 * np.max(np.abs(h))


def test_trace_identity():
    for s, n in [(0, 1), (1, 3), (6, 8)]:
        h = omega_matrix(BlockIndex(s, n), omega=2.4, q_bare=1.0)
        assert np.trace(h) == pytest.approx(s * 2.4 / 2.0, rel=1e-12, abs=1e-14)


def test_jacobi_diag_and_2x2():
    vals, _ = jacobi_eigh(np.diag([3.0, -1.0]))
    np.testing.assert_allclose(vals, [-1.0, 3.0], atol=0.0)
    vals, vecs = jacobi_eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(vals, [-1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(2), atol=1e-14)


def test_jacobi_random_symmetric_residual(rng):
    for _ in range(20):
        a = rng.normal(size=(7, 7))
        a = a + a.T
        vals, vecs = jacobi_eigh(a)
        resid = a @ vecs - vecs * vals
        assert np.max(np.abs(resid)) < 1e-10 * max(np.max(np.abs(a)), 1.0)
        np.testing.assert_allclose(vecs.T @ vecs, np.eye(7), atol=1e-12)
        assert np.all(np.diff(vals) >= 0.0)


def test_jacobi_agrees_with_numpy(rng):
    a = rng.normal(size=(10, 10))
    a = a + a.T
    vals, _ = jacobi_eigh(a)
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(a), atol=1e-10)


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(NotSymmetricError):
        numeric_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotSymmetricError):
        numeric_eigensystem(np.ones((2, 3)))


def test_degenerate_projector_match_across_range():
    # Dark eigenspace projector: analytic vs numeric, all 1 <= s <= 12,
    # s <= N <= 24 (coarse N stride to keep runtime modest but spanning).
    omega, q = 2.0, 1.0
    worst = 0.0
    for s in range(1, 13):
        for n in range(s, 25):
            idx = BlockIndex(s, n)
            block = analytic_eigensystem(idx, omega, q)
            h = omega_matrix(idx, omega, q)
            vals, vecs = numeric_eigensystem(h)
            gap = q * math.sqrt(s / n)
            atol = 0.25 * gap
            target = 0.5 * omega
            p_num = eigenspace_projector(vals, vecs, target, atol)
            p_ana = eigenspace_projector(block.eigenvalues, block.vectors,
                                         target, atol)
            assert np.linalg.matrix_rank(p_ana, tol=1e-8) == s - 1
            worst = max(worst, float(np.linalg.norm(p_num - p_ana)))
    assert worst <= 1e-9


def test_jacobi_convergence_guard():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ConvergenceError):
        jacobi_eigh(a, max_sweeps=0)
