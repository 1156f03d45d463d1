"""Immutable sparse undirected graphs, edge-list I/O and degree statistics.

A :class:`Graph` stores a simple undirected graph in CSR layout: node ``i``
has neighbours ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending, and
every edge appears once in each direction.
"""

from __future__ import annotations

import hashlib
import logging
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import EmptyGraphError, GraphError, ParameterError, ParseError

logger = logging.getLogger(__name__)

__all__ = [
    "Graph",
    "DegreeStats",
    "IngestStats",
    "parse_edge_list",
    "parse_edge_list_with_stats",
    "read_edge_list",
    "write_edge_list",
    "serialize_edge_list",
    "degree_stats",
    "largest_component",
    "two_core",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph in CSR form.

    Use :meth:`from_edges` or :meth:`from_csr` rather than the raw
    constructor; both guarantee the symmetry and simplicity invariants.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: Optional[tuple] = field(default=None)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, u, v, labels: Optional[Sequence] = None) -> "Graph":
        """Build a graph on ``n`` nodes from endpoint arrays.

        Edges may be given in either or both directions and may repeat;
        self-loops are dropped silently. Use :func:`parse_edge_list` when the
        number of discarded entries matters.
        """
        graph, _, _ = cls._build(n, u, v, labels)
        return graph

    @classmethod
    def _build(cls, n, u, v, labels=None):
        n = int(n)
        if n < 0:
            raise GraphError("node count must be non-negative")
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise GraphError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise GraphError("edge endpoint outside 0..n-1")
        loops = u == v
        n_loops = int(loops.sum())
        u, v = u[~loops], v[~loops]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = np.unique(lo * n + hi)
        n_dupes = int(u.size - keys.size)
        lo, hi = np.divmod(keys, n) if n else (keys, keys)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        idx_dtype = np.int32 if n < 2**31 - 1 else np.int64
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphError("labels must have one entry per node")
        graph = cls(_readonly(indptr), _readonly(dst.astype(idx_dtype)), labels)
        return graph, n_loops, n_dupes

    @classmethod
    def from_csr(cls, indptr, indices, labels=None, validate: bool = True) -> "Graph":
        indptr = np.array(indptr, dtype=np.int64)
        indices = np.array(indices)
        graph = cls(_readonly(indptr), _readonly(indices), None if labels is None else tuple(labels))
        if validate:
            graph.check()
        return graph

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        nodes = list(g.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        if g.number_of_edges():
            u, v = np.array([(index[a], index[b]) for a, b in g.edges()]).T
        else:
            u = v = np.empty(0, dtype=np.int64)
        return cls.from_edges(len(nodes), u, v, labels=[str(x) for x in nodes])

    # -- basic properties ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return _readonly(np.diff(self.indptr))

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def label(self, i: int):
        return i if self.labels is None else self.labels[i]

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """The adjacency matrix as a float64 CSR matrix (cached, shared)."""
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def sources(self) -> np.ndarray:
        """Row index of every CSR entry, i.e. the source of each directed edge."""
        return _readonly(np.repeat(np.arange(self.n, dtype=self.indices.dtype), self.degrees))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Undirected edges as ``(u, v)`` arrays with ``u < v``, sorted."""
        mask = self.sources < self.indices
        return self.sources[mask].astype(np.int64), self.indices[mask].astype(np.int64)

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.indptr.astype("<i8").tobytes())
        h.update(self.indices.astype("<i8").tobytes())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:
        return hash(self.digest)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def check(self) -> None:
        """Assert the CSR, symmetry and simplicity invariants.

        Raises
        ------
        GraphError
            If any invariant is violated.
        """
        ip, ix = self.indptr, self.indices
        n = self.n
        if n < 0 or ip[0] != 0 or np.any(np.diff(ip) < 0) or ip[-1] != len(ix):
            raise GraphError("malformed indptr")
        if ix.size and (ix.min() < 0 or ix.max() >= n):
            raise GraphError("neighbour index out of range")
        src = self.sources
        if np.any(src == ix):
            raise GraphError("self-loop present")
        # strictly increasing within each row => sorted and duplicate-free
        same_row = src[1:] == src[:-1]
        if np.any(ix[1:][same_row] <= ix[:-1][same_row]):
            raise GraphError("neighbour lists not sorted or contain duplicates")
        fwd = src.astype(np.int64) * max(n, 1) + ix
        rev = np.sort(ix.astype(np.int64) * max(n, 1) + src)
        if not np.array_equal(fwd, rev):
            raise GraphError("adjacency is not symmetric")
        if self.degrees.sum() != 2 * self.m or len(ix) % 2:
            raise GraphError("degree sum differs from 2m")
        if self.labels is not None and len(self.labels) != n:
            raise GraphError("label count differs from node count")

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph on ``nodes`` (kept in ascending index order).

        Labels carry over; an unlabeled parent yields labels equal to the
        parent's node indices so the mapping back is retained.
        """
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(nodes.size)
        u, v = self.edges()
        keep = (remap[u] >= 0) & (remap[v] >= 0)
        if self.labels is None:
            labels = [int(i) for i in nodes]
        else:
            labels = [self.labels[i] for i in nodes]
        return Graph.from_edges(nodes.size, remap[u[keep]], remap[v[keep]], labels=labels)


@dataclass(frozen=True)
class DegreeStats:
    """Degree histogram and moments. ``histogram[k]`` is the number of nodes of degree ``k``."""

    n: int
    m: int
    histogram: np.ndarray
    mean: float
    second_moment: float
    max_degree: int


@dataclass
class IngestStats:
    lines: int = 0
    self_loops: int = 0
    duplicates: int = 0
    unreciprocated: int = 0


SYMMETRIZE_MODES = ("union", "mutual")


# -- edge-list I/O --------------------------------------------------------------


def parse_edge_list_with_stats(stream: Iterable[str], symmetrize: str = "union") -> tuple[Graph, IngestStats]:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    Labels are arbitrary tokens, mapped to dense indices in order of first
    appearance. Lines beginning with ``#`` and blank lines are skipped.
    Duplicates are merged and self-loops dropped.

    Parameters
    ----------
    stream
        Text lines (or bytes, decoded as UTF-8).
    symmetrize : {"union", "mutual"}
        How to read a directed file. ``"union"`` keeps an edge listed in
        either direction; ``"mutual"`` keeps only pairs listed in both
        directions. Nodes whose edges are all dropped stay as isolated nodes.
    """
    if symmetrize not in SYMMETRIZE_MODES:
        raise ParameterError(f"symmetrize must be one of {SYMMETRIZE_MODES}, got {symmetrize!r}")
    index: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    stats = IngestStats()
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}: {line!r}", lineno)
        stats.lines += 1
        a, b = (index.setdefault(t, len(index)) for t in tokens)
        us.append(a)
        vs.append(b)
    if not index:
        raise EmptyGraphError("edge list contains no edges")
    if symmetrize == "mutual":
        us, vs = _mutual_pairs(len(index), np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64), stats)
    graph, stats.self_loops, stats.duplicates = Graph._build(len(index), us, vs, labels=list(index))
    if stats.self_loops:
        warnings.warn(f"dropped {stats.self_loops} self-loop(s)", stacklevel=2)
    if stats.duplicates:
        logger.info("merged %d duplicate edge(s)", stats.duplicates)
    return graph, stats


def _mutual_pairs(n: int, u: np.ndarray, v: np.ndarray, stats: IngestStats) -> tuple[np.ndarray, np.ndarray]:
    # self-loops pass through so they are still counted and dropped in one place
    keep = np.isin(v * n + u, u * n + v) | (u == v)
    lo, hi = np.minimum(u[~keep], v[~keep]), np.maximum(u[~keep], v[~keep])
    stats.unreciprocated = int(np.unique(lo * n + hi).size)
    if stats.unreciprocated:
        logger.info("dropped %d unreciprocated edge(s)", stats.unreciprocated)
    return u[keep], v[keep]


def parse_edge_list(stream: Iterable[str], symmetrize: str = "union") -> Graph:
    return parse_edge_list_with_stats(stream, symmetrize)[0]


def read_edge_list(path, symmetrize: str = "union") -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, symmetrize)


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write the canonical serialization: one ``u v`` line per edge, ``u < v``, sorted by index."""
    u, v = graph.edges()
    for a, b in zip(u.tolist(), v.tolist()):
        stream.write(f"{graph.label(a)} {graph.label(b)}\n")


def serialize_edge_list(graph: Graph) -> str:
    import io

    buf = io.StringIO()
    write_edge_list(graph, buf)
    return buf.getvalue()


# -- statistics and structure -------------------------------------------------------


def degree_stats(graph: Graph) -> DegreeStats:
    deg = graph.degrees
    hist = np.bincount(deg, minlength=1).astype(np.int64)
    ks = np.arange(hist.size, dtype=np.int64)
    n = graph.n
    first = int((ks * hist).sum())
    second = int((ks * ks * hist).sum())
    assert first == 2 * graph.m
    return DegreeStats(
        n=n,
        m=graph.m,
        histogram=hist,
        mean=first / n if n else 0.0,
        second_moment=second / n if n else 0.0,
        max_degree=int(deg.max()) if n else 0,
    )


def component_labels(graph: Graph) -> tuple[int, np.ndarray]:
    return connected_components(graph.adjacency, directed=False)


def largest_component_nodes(graph: Graph) -> np.ndarray:
    """Node indices of the largest connected component, ties to the smallest contained index."""
    if graph.n == 0:
        raise EmptyGraphError("graph has no nodes")
    k, comp = component_labels(graph)
    sizes = np.bincount(comp, minlength=k)
    first = np.full(k, graph.n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(graph.n))
    best = np.lexsort((first, -sizes))[0]
    return np.flatnonzero(comp == best)


def is_connected(graph: Graph) -> bool:
    return graph.n > 0 and component_labels(graph)[0] == 1


def largest_component(graph: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    A connected input is returned unchanged (same object).
    """
    nodes = largest_component_nodes(graph)
    if nodes.size == graph.n:
        return graph
    return graph.subgraph(nodes)


def two_core(graph: Graph) -> np.ndarray:
    """Boolean mask of nodes in the 2-core (repeatedly strip degree <= 1 nodes)."""
    deg = graph.degrees.astype(np.int64)
    alive = np.ones(graph.n, dtype=bool)
    frontier = np.flatnonzero(deg <= 1)
    ip, ix = graph.indptr, graph.indices
    while frontier.size:
        alive[frontier] = False
        starts, stops = ip[frontier], ip[frontier + 1]
        counts = stops - starts
        if counts.sum() == 0:
            break
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(counts.sum())
        nbrs = ix[offsets]
        nbrs = nbrs[alive[nbrs]]
        np.subtract.at(deg, nbrs, 1)
        cand = np.unique(nbrs)
        frontier = cand[deg[cand] <= 1]
    return alive
