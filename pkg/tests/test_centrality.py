import io
import itertools

import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp

from nbcentrality.centrality import (
    degree_centrality,
    eigenvector_centrality,
    ihara_bass_matrix,
    ihara_bass_operator,
    nb_centrality_oracle,
    nb_edge_space,
    nonbacktracking_centrality,
    nonbacktracking_matrix,
)
from nbcentrality.errors import DegenerateResultError, DisconnectedGraphError, GraphError
from nbcentrality.generators import generate_er
from nbcentrality.graph import Graph, degree_stats, largest_component, parse_edge_list
from nbcentrality.theory import hub_predictions, nb_leading_eigenvalue

from conftest import complete, cycle, from_nx, star


def two_triangles():
    return Graph.from_edges(7, [0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 6])


class TestDegree:
    def test_path(self):
        g = Graph.from_edges(3, [0, 1], [1, 2])
        np.testing.assert_allclose(degree_centrality(g).scores, np.array([1, 2, 1]) / np.sqrt(6))

    def test_edgeless_is_degenerate(self):
        cv = degree_centrality(Graph.from_edges(3, [], []))
        assert cv.degenerate and not cv.scores.any()


class TestEigenvector:
    def test_star_closed_form(self):
        leaves = 9
        cv = eigenvector_centrality(star(leaves))
        assert cv.eigenvalue == pytest.approx(3.0, abs=1e-9)
        assert cv.scores[0] == pytest.approx(np.sqrt(0.5), abs=1e-9)
        np.testing.assert_allclose(cv.scores[1:], np.sqrt(0.5 / leaves), atol=1e-9)

    def test_matches_dense(self):
        g = largest_component(generate_er(150, 4.0, seed=6))
        cv = eigenvector_centrality(g, tol=1e-13)
        vals, vecs = np.linalg.eigh(g.adjacency.toarray())
        top = np.abs(vecs[:, -1])
        assert cv.eigenvalue == pytest.approx(vals[-1], abs=1e-9)
        np.testing.assert_allclose(cv.scores, top, atol=1e-8)

    def test_disconnected_error_names_the_option(self):
        with pytest.raises(DisconnectedGraphError, match="largest_component"):
            eigenvector_centrality(two_triangles())
        with pytest.raises(DisconnectedGraphError, match="--largest-component"):
            eigenvector_centrality(two_triangles())

    def test_largest_component_zero_fills(self):
        g = Graph.from_edges(7, [0, 1, 2, 2, 4], [1, 2, 0, 3, 5])
        cv = eigenvector_centrality(g, largest_component=True)
        assert cv.component_size == 4
        assert np.all(cv.scores[4:] == 0.0)
        assert np.linalg.norm(cv.scores) == pytest.approx(1.0)

    def test_single_node(self):
        cv = eigenvector_centrality(Graph.from_edges(1, [], []))
        assert cv.scores.tolist() == [1.0]

    def test_perron_nonnegative(self):
        g = largest_component(generate_er(2000, 3.0, seed=2))
        cv = eigenvector_centrality(g)
        assert cv.converged and np.all(cv.scores >= 0)
        assert cv.scores.min() > 0  # irreducible: strictly positive

    def test_unconverged_flag(self, caplog):
        g = largest_component(generate_er(2000, 3.0, seed=2))
        cv = eigenvector_centrality(g, max_iters=2)
        assert not cv.converged
        assert "did not converge" in caplog.text

    def test_hub_eigenvalue_tracks_realized_degree(self, hub_ensemble):
        # each instance against the hub eigenvalue for its own realized hub degree
        for g, cv in hub_ensemble:
            d = int(g.degrees[-1])
            assert abs(cv.eigenvalue / hub_predictions(10, d).z2 - 1) < 0.02


class TestNonbacktracking:
    def test_complete_graph(self, k4):
        cv = nonbacktracking_centrality(k4, tol=1e-12)
        assert cv.eigenvalue == pytest.approx(2.0, abs=1e-10)
        np.testing.assert_allclose(cv.scores, 0.5, atol=1e-9)

    def test_random_regular_collapses_to_uniform(self):
        g = from_nx(nx.random_regular_graph(4, 60, seed=1))
        cv = nonbacktracking_centrality(g, tol=1e-12)
        assert cv.eigenvalue == pytest.approx(3.0, abs=1e-9)
        np.testing.assert_allclose(cv.scores, 1 / np.sqrt(60), atol=1e-8)

    def test_er_eigenvalue_near_mean_degree(self):
        g = largest_component(generate_er(20_000, 10.0, seed=3))
        cv = nonbacktracking_centrality(g, tol=1e-8)
        assert cv.converged
        assert abs(cv.eigenvalue / nb_leading_eigenvalue(degree_stats(g)) - 1) < 0.03

    def test_tree_raises(self):
        with pytest.raises(DegenerateResultError, match="forest"):
            nonbacktracking_centrality(star(5))

    def test_cycle_warns(self):
        with pytest.warns(RuntimeWarning, match="union of cycles"):
            nonbacktracking_centrality(cycle(6), max_iters=50)

    def test_edgeless_raises(self):
        with pytest.raises(GraphError):
            nonbacktracking_centrality(Graph.from_edges(1, [], []))

    def test_matches_oracle(self):
        g = largest_component(generate_er(100, 4.0, seed=12))
        fast = nonbacktracking_centrality(g, tol=1e-13)
        slow = nb_centrality_oracle(g)
        assert fast.eigenvalue == pytest.approx(slow.eigenvalue, abs=1e-9)
        np.testing.assert_allclose(fast.scores, slow.scores, atol=1e-8)

    def test_dangling_tree_scores_from_core(self):
        # pendant nodes get weight only through their core neighbour
        g = parse_edge_list(io.StringIO("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4\n"))
        cv = nonbacktracking_centrality(g, tol=1e-12)
        assert 0 < cv.scores[4] < cv.scores[3]


class TestOracle:
    def test_triangle(self, k3):
        cv = nb_centrality_oracle(k3)
        assert cv.eigenvalue == pytest.approx(1.0)
        np.testing.assert_allclose(cv.scores, 1 / np.sqrt(3))

    def test_k4(self, k4):
        cv = nb_centrality_oracle(k4)
        assert cv.eigenvalue == pytest.approx(2.0)
        np.testing.assert_allclose(cv.scores, 0.5)

    def test_petersen(self, petersen):
        cv = nb_centrality_oracle(petersen)
        assert cv.eigenvalue == pytest.approx(2.0)
        np.testing.assert_allclose(cv.scores, 1 / np.sqrt(10))

    def test_arpack_branch(self):
        g = largest_component(generate_er(800, 5.0, seed=1))
        assert 2 * g.m > 4000
        slow = nb_centrality_oracle(g, tol=1e-13)
        fast = nonbacktracking_centrality(g, tol=1e-13)
        np.testing.assert_allclose(fast.scores, slow.scores, atol=1e-8)


class TestOperators:
    def test_ihara_bass_operator_equals_matrix(self, grid3):
        op = ihara_bass_operator(grid3)
        mat = ihara_bass_matrix(grid3)
        x = np.random.default_rng(0).normal(size=18)
        np.testing.assert_allclose(op.matvec(x), mat @ x)

    def test_edge_space_invariants(self, petersen):
        space = nb_edge_space(petersen)
        assert len(space) == 2 * petersen.m
        assert np.array_equal(space.reverse[space.reverse], np.arange(len(space)))
        assert np.array_equal(space.source[space.reverse], space.target)

    def test_b_matches_definition(self, grid3):
        space = nb_edge_space(grid3)
        b = nonbacktracking_matrix(grid3, space).toarray()
        edges = list(zip(space.source.tolist(), space.target.tolist()))
        brute = np.zeros_like(b)
        for (r, (k, l)), (c, (i, j)) in itertools.product(enumerate(edges), repeat=2):
            brute[r, c] = float(j == k and i != l)
        assert np.array_equal(b, brute)

    def test_b_row_sums(self, petersen):
        b = nonbacktracking_matrix(petersen)
        assert np.all(np.asarray(b.sum(axis=1)).ravel() == 2)
        assert sp.issparse(b)

    def test_spectra_agree(self):
        # every nonzero eigenvalue of B other than +-1 appears in the Ihara-Bass spectrum
        g = complete(5)
        eb = np.sort_complex(np.linalg.eigvals(nonbacktracking_matrix(g).toarray()))
        em = np.linalg.eigvals(ihara_bass_matrix(g).toarray())
        for lam in eb:
            if abs(abs(lam) - 1) > 1e-6:
                assert np.min(np.abs(em - lam)) < 1e-8
