import numpy as np
import pytest
import scipy.sparse as sp

from nbcentrality.centrality import ihara_bass_matrix, nonbacktracking_matrix
from nbcentrality.errors import DimensionError, ParameterError
from nbcentrality.generators import generate_er
from nbcentrality.spectral import (
    DENSE_MAX_DIM,
    dense_leading_eigenpair,
    fix_sign,
    power_iteration,
    residual,
)


def test_triangle(k3):
    res = power_iteration(k3.adjacency, tol=1e-12)
    assert res.converged
    assert res.eigenvalue == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(res.vector, np.full(3, 1 / np.sqrt(3)), atol=1e-10)


def test_star_needs_shift(star4):
    # bipartite: +2 and -2 tie, so the plain iteration oscillates
    plain = power_iteration(star4.adjacency, tol=1e-10, max_iters=500)
    assert not plain.converged
    res = power_iteration(star4.adjacency, tol=1e-12, shift=1.0)
    assert res.converged
    assert res.eigenvalue == pytest.approx(2.0, abs=1e-12)
    expected = np.array([np.sqrt(0.5)] + [np.sqrt(0.125)] * 4)
    np.testing.assert_allclose(res.vector, expected, atol=1e-10)


def test_er_matches_eigh():
    g = generate_er(200, 8.0, seed=3)
    res = power_iteration(g.adjacency, tol=1e-13, shift=1.0)
    vals, vecs = np.linalg.eigh(g.adjacency.toarray())
    top = fix_sign(vecs[:, -1])
    assert abs(res.eigenvalue - vals[-1]) < 1e-8
    assert res.vector @ top > 1 - 1e-10


def test_residual_contract(petersen):
    res = power_iteration(petersen.adjacency, tol=1e-12, shift=1.0)
    assert res.converged
    assert residual(petersen.adjacency, res.eigenvalue, res.vector) <= 1e-12 * abs(res.eigenvalue)
    assert res.residual == pytest.approx(residual(petersen.adjacency, res.eigenvalue, res.vector), abs=1e-15)


def test_deterministic_by_seed():
    g = generate_er(300, 5.0, seed=1)
    a = power_iteration(g.adjacency, tol=1e-10, shift=1.0, seed=4)
    b = power_iteration(g.adjacency, tol=1e-10, shift=1.0, seed=4)
    assert a.iterations == b.iterations and np.array_equal(a.vector, b.vector)


def test_nonconvergence_is_reported_not_raised():
    g = generate_er(300, 5.0, seed=1)
    res = power_iteration(g.adjacency, tol=1e-14, max_iters=3, shift=1.0)
    assert not res.converged and res.iterations == 3


def test_bad_arguments():
    with pytest.raises(ParameterError):
        power_iteration(np.eye(2), tol=0)
    with pytest.raises(DimensionError):
        power_iteration(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        dense_leading_eigenpair(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        dense_leading_eigenpair(sp.identity(DENSE_MAX_DIM + 1))


def test_fix_sign():
    assert fix_sign(np.array([0.1, -0.9])).tolist() == [-0.1, 0.9]


class TestDenseOracle:
    def test_triangle(self, k3):
        res = dense_leading_eigenpair(k3.adjacency)
        assert res.eigenvalue == pytest.approx(2.0)
        np.testing.assert_allclose(res.vector, np.full(3, 1 / np.sqrt(3)))

    def test_cycle_degenerate_top(self, cycle5):
        res = dense_leading_eigenpair(cycle5.adjacency)
        assert res.eigenvalue == pytest.approx(2.0)
        np.testing.assert_allclose(res.vector, np.full(5, 1 / np.sqrt(5)), atol=1e-12)

    def test_nonsymmetric_real_vector(self, grid3):
        b = nonbacktracking_matrix(grid3)
        res = dense_leading_eigenpair(b)
        assert not np.iscomplexobj(res.vector)
        assert res.residual < 1e-10
        assert np.all(res.vector > -1e-12)

    def test_power_iteration_on_b_matches(self, grid3):
        b = nonbacktracking_matrix(grid3)
        dense = dense_leading_eigenpair(b)
        res = power_iteration(b, tol=1e-13, shift=1.0)
        assert abs(res.eigenvalue - dense.eigenvalue) < 1e-8
        np.testing.assert_allclose(res.vector, dense.vector, atol=1e-8)

    def test_ihara_bass_matches_b(self, petersen):
        lam_m = dense_leading_eigenpair(ihara_bass_matrix(petersen)).eigenvalue
        lam_b = dense_leading_eigenpair(nonbacktracking_matrix(petersen)).eigenvalue
        assert lam_m == pytest.approx(2.0) and lam_b == pytest.approx(2.0)


def test_symmetric_rayleigh_bound():
    # Rayleigh quotients never exceed the top eigenvalue of a symmetric operator
    g = generate_er(150, 6.0, seed=8)
    a = g.adjacency
    top = np.linalg.eigvalsh(a.toarray())[-1]
    for it in (1, 2, 5, 20):
        res = power_iteration(a, tol=1e-15, max_iters=it, shift=1.0)
        assert res.eigenvalue <= top + 1e-12
