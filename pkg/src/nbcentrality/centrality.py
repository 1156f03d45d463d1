"""Degree, eigenvector and nonbacktracking centrality.

Nonbacktracking centrality has two routes:

* :func:`nonbacktracking_centrality` runs power iteration on the 2n x 2n
  Ihara-Bass operator ``[[A, I - D], [I, 0]]`` applied matrix-free and keeps
  the first ``n`` entries of its leading eigenvector;
* :func:`nb_centrality_oracle` materializes the 2m x 2m nonbacktracking
  matrix ``B`` over directed edges, takes its leading eigenvector ``v`` and
  sums ``x_j = sum_i A_ij v[i -> j]`` explicitly.

The two are independent and are cross-checked in the tests.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateResultError, DimensionError, DisconnectedGraphError, GraphError
from .graph import Graph, is_connected, largest_component_nodes, two_core
from .spectral import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    DENSE_MAX_DIM,
    EigenResult,
    as_operator,
    dense_leading_eigenpair,
    fix_sign,
    power_iteration,
)

logger = logging.getLogger(__name__)

__all__ = [
    "CentralityVector",
    "NBEdgeSpace",
    "degree_centrality",
    "eigenvector_centrality",
    "nonbacktracking_centrality",
    "nb_centrality_oracle",
    "ihara_bass_operator",
    "ihara_bass_matrix",
    "nonbacktracking_matrix",
    "nb_edge_space",
    "leading_adjacency_eigenpair",
    "leading_ihara_bass_eigenpair",
]

CLAMP_TOL = 1e-10
NEGATIVE_ERROR_TOL = 1e-6
ORACLE_MAX_EDGES = 20_000

# Eigenvector centrality defaults to shift 1: on bipartite graphs the adjacency
# spectrum is symmetric and unshifted power iteration would oscillate.
ADJACENCY_SHIFT = 1.0
IHARA_BASS_SHIFT = 1.0


@dataclass(frozen=True)
class CentralityVector:
    """Unit-L2, nonnegative node scores and the solver metadata behind them."""

    scores: np.ndarray
    method: str
    graph_digest: str
    eigenvalue: Optional[float] = None
    residual: Optional[float] = None
    iterations: int = 0
    converged: bool = True
    degenerate: bool = False
    normalization: str = "unit-L2"
    component_size: Optional[int] = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.scores.size


# -- operators ------------------------------------------------------------------------


def ihara_bass_operator(graph: Graph) -> spla.LinearOperator:
    """Matrix-free ``[[A, I - D], [I, 0]]``; never materialized."""
    n = graph.n
    adj = graph.adjacency
    one_minus_deg = 1.0 - graph.degrees.astype(np.float64)

    def matvec(z):
        z = np.asarray(z).ravel()
        x, y = z[:n], z[n:]
        out = np.empty(2 * n)
        out[:n] = adj @ x
        out[:n] += one_minus_deg * y
        out[n:] = x
        return out

    return as_operator(matvec, 2 * n)


def ihara_bass_matrix(graph: Graph) -> sp.csr_matrix:
    """Explicit sparse Ihara-Bass matrix, for dense cross-checks only."""
    n = graph.n
    eye = sp.identity(n, format="csr")
    diag = sp.diags(1.0 - graph.degrees.astype(np.float64))
    return sp.bmat([[graph.adjacency, diag], [eye, None]], format="csr")


@dataclass(frozen=True)
class NBEdgeSpace:
    """Directed-edge index: edge ``e`` is ``source[e] -> target[e]`` in CSR order.

    ``reverse[e]`` is the index of ``target[e] -> source[e]``.
    """

    source: np.ndarray
    target: np.ndarray
    reverse: np.ndarray

    def __len__(self) -> int:
        return self.source.size


def nb_edge_space(graph: Graph) -> NBEdgeSpace:
    src = graph.sources.astype(np.int64)
    dst = graph.indices.astype(np.int64)
    n = max(graph.n, 1)
    keys = src * n + dst  # sorted, since CSR rows and their columns are sorted
    reverse = np.searchsorted(keys, dst * n + src)
    return NBEdgeSpace(src, dst, reverse)


def nonbacktracking_matrix(graph: Graph, space: Optional[NBEdgeSpace] = None) -> sp.csr_matrix:
    """Hashimoto matrix: ``B[k->l, i->j] = 1`` iff ``j == k`` and ``i != l``."""
    space = space or nb_edge_space(graph)
    ip = graph.indptr
    deg = graph.degrees.astype(np.int64)
    # for edge p = (k -> l), pair it with every edge q leaving k; column is reverse[q] = (i -> k)
    row_deg = deg[space.source]
    rows = np.repeat(np.arange(len(space)), row_deg)
    starts = np.repeat(ip[space.source] - (np.cumsum(row_deg) - row_deg), row_deg)
    q = starts + np.arange(rows.size)
    keep = q != rows  # q == p would give i == l: the backtrack
    rows, cols = rows[keep], space.reverse[q[keep]]
    size = len(space)
    return sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(size, size))


# -- shared helpers ------------------------------------------------------------------


def _restrict(graph: Graph, largest_component: bool) -> tuple[Graph, Optional[np.ndarray]]:
    if graph.n == 0:
        raise GraphError("graph has no nodes")
    if is_connected(graph):
        return graph, None
    if not largest_component:
        raise DisconnectedGraphError(
            "graph is disconnected; eigenvector-type centrality is component-local. "
            "Pass largest_component=True (CLI: --largest-component) to score the largest component."
        )
    nodes = largest_component_nodes(graph)
    return graph.subgraph(nodes), nodes


def _scatter(values: np.ndarray, nodes: Optional[np.ndarray], n: int) -> np.ndarray:
    if nodes is None:
        return values
    full = np.zeros(n)
    full[nodes] = values
    return full


def _clean(scores: np.ndarray, what: str) -> np.ndarray:
    """Normalize, then clamp tiny negatives; large negatives mean a wrong eigenpair."""
    norm = np.linalg.norm(scores)
    if norm == 0.0 or not np.isfinite(norm):
        raise DegenerateResultError(f"{what}: eigenvector is zero or non-finite")
    scores = scores / norm
    worst = scores.min()
    if worst < -NEGATIVE_ERROR_TOL:
        raise DegenerateResultError(
            f"{what}: entry {worst:.3g} is negative; the solver likely converged to a "
            "non-Perron eigenpair (try a larger shift or tighter tolerance)"
        )
    if worst < -CLAMP_TOL:
        warnings.warn(f"{what}: clamping negative entries down to {worst:.3g}", RuntimeWarning, stacklevel=3)
    scores = np.clip(scores, 0.0, None)
    return scores / np.linalg.norm(scores)


# -- centralities ---------------------------------------------------------------------


def degree_centrality(graph: Graph) -> CentralityVector:
    if graph.n < 1:
        raise GraphError("graph has no nodes")
    deg = graph.degrees.astype(np.float64)
    norm = np.linalg.norm(deg)
    degenerate = norm == 0.0
    scores = deg if degenerate else deg / norm
    return CentralityVector(scores, "degree", graph.digest, degenerate=degenerate)


def leading_adjacency_eigenpair(graph: Graph, tol=DEFAULT_TOL, seed=0, max_iters=DEFAULT_MAX_ITERS,
                                shift=ADJACENCY_SHIFT) -> EigenResult:
    return power_iteration(graph.adjacency, tol=tol, max_iters=max_iters, shift=shift, seed=seed)


def leading_ihara_bass_eigenpair(graph: Graph, tol=DEFAULT_TOL, seed=0, max_iters=DEFAULT_MAX_ITERS,
                                 shift=IHARA_BASS_SHIFT) -> EigenResult:
    return power_iteration(ihara_bass_operator(graph), tol=tol, max_iters=max_iters, shift=shift, seed=seed)


def eigenvector_centrality(
    graph: Graph,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
    largest_component: bool = False,
    shift: float = ADJACENCY_SHIFT,
) -> CentralityVector:
    """Leading eigenvector of the adjacency matrix, unit-L2 and nonnegative.

    With ``largest_component=True`` a disconnected graph is scored on its
    largest component and every other node gets 0; otherwise it raises
    :class:`DisconnectedGraphError`. Non-convergence is reported through
    ``converged=False``, not an exception.
    """
    sub, nodes = _restrict(graph, largest_component)
    if sub.m == 0:  # connected and edgeless: a single node
        scores = _scatter(np.ones(1), nodes, graph.n)
        return CentralityVector(scores, "eigenvector", graph.digest, eigenvalue=0.0, residual=0.0,
                                component_size=sub.n)
    res = leading_adjacency_eigenpair(sub, tol=tol, seed=seed, max_iters=max_iters, shift=shift)
    if not res.converged:
        logger.warning("eigenvector centrality did not converge in %d sweeps (residual %.3g)",
                       res.iterations, res.residual)
    scores = _clean(res.vector, "eigenvector centrality")
    return CentralityVector(
        _scatter(scores, nodes, graph.n),
        "eigenvector",
        graph.digest,
        eigenvalue=res.eigenvalue,
        residual=res.residual,
        iterations=res.iterations,
        converged=res.converged,
        component_size=sub.n,
        meta={"tol": tol, "seed": seed, "shift": shift},
    )


def _check_nb_structure(graph: Graph) -> None:
    if graph.m == 0:
        raise GraphError("nonbacktracking centrality needs at least one edge")
    core = two_core(graph)
    if not core.any():
        raise DegenerateResultError(
            "graph is a forest: its nonbacktracking matrix is nilpotent (every nonbacktracking "
            "walk dies at a leaf), so nonbacktracking centrality vanishes identically"
        )
    core_deg = np.count_nonzero(core[graph.sources] & core[graph.indices]) / core.sum()
    if core_deg <= 2.0:
        warnings.warn(
            "2-core is a union of cycles (mean degree 2): the nonbacktracking spectral radius is 1 "
            "and the leading eigenvector is degenerate; convergence will be slow",
            RuntimeWarning,
            stacklevel=3,
        )


def nonbacktracking_centrality(
    graph: Graph,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
    largest_component: bool = False,
    shift: float = IHARA_BASS_SHIFT,
) -> CentralityVector:
    """Nonbacktracking centrality through the Ihara-Bass operator.

    The first ``n`` entries of the operator's leading eigenvector equal
    ``x_j = sum_i A_ij v[i -> j]`` up to scale, so they are used directly.
    ``eigenvalue`` is the operator's (and hence the nonbacktracking matrix's)
    leading eigenvalue.
    """
    sub, nodes = _restrict(graph, largest_component)
    _check_nb_structure(sub)
    res = leading_ihara_bass_eigenpair(sub, tol=tol, seed=seed, max_iters=max_iters, shift=shift)
    if not res.converged:
        logger.warning("nonbacktracking centrality did not converge in %d sweeps (residual %.3g)",
                       res.iterations, res.residual)
    head = res.vector[: sub.n]
    if not np.any(np.abs(head) > CLAMP_TOL):
        raise DegenerateResultError("leading Ihara-Bass eigenvector has an all-zero node block")
    scores = _clean(fix_sign(head), "nonbacktracking centrality")
    return CentralityVector(
        _scatter(scores, nodes, graph.n),
        "nonbacktracking",
        graph.digest,
        eigenvalue=res.eigenvalue,
        residual=res.residual,
        iterations=res.iterations,
        converged=res.converged,
        component_size=sub.n,
        meta={"tol": tol, "seed": seed, "shift": shift},
    )


def nb_centrality_oracle(graph: Graph, tol: float = DEFAULT_TOL) -> CentralityVector:
    """Nonbacktracking centrality from the explicit 2m x 2m matrix (desk scale).

    Uses a dense eigendecomposition up to 4000 directed edges and ARPACK
    beyond, capped at 20000.
    """
    space = nb_edge_space(graph)
    size = len(space)
    if size == 0:
        raise GraphError("nonbacktracking centrality needs at least one edge")
    if size > ORACLE_MAX_EDGES:
        raise DimensionError(f"oracle limited to 2m <= {ORACLE_MAX_EDGES}, got {size}")
    b = nonbacktracking_matrix(graph, space)
    if size <= DENSE_MAX_DIM:
        res = dense_leading_eigenpair(b)
        lam, v, resid = res.eigenvalue, res.vector, res.residual
    else:
        vals, vecs = spla.eigs(b, k=1, which="LR", tol=tol, v0=np.ones(size))
        lam = float(vals[0].real)
        v = vecs[:, 0]
        v = np.real(v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))])))
        v /= np.linalg.norm(v)
        resid = float(np.linalg.norm(b @ v - lam * v))
    v = fix_sign(v)
    x = np.bincount(space.target, weights=v, minlength=graph.n)
    scores = _clean(x, "nonbacktracking oracle")
    return CentralityVector(scores, "nonbacktracking", graph.digest, eigenvalue=lam, residual=resid,
                            component_size=graph.n, meta={"route": "explicit-B"})
