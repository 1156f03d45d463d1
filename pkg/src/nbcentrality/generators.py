"""Seeded generators for the random-graph-plus-hub model and power-law configuration graphs.

Randomness comes from numpy's PCG64 bit generator. A user seed is expanded
with :class:`numpy.random.SeedSequence` and split into three independent
child streams, always in this order:

    0. the Erdos-Renyi block
    1. the hub's edges
    2. degree sampling and stub matching for the configuration model

so changing e.g. the hub degree never perturbs the Erdos-Renyi block drawn
for the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import Graph

__all__ = [
    "HubModelParams",
    "PowerLawParams",
    "substreams",
    "erdos_renyi_edges",
    "generate_er",
    "generate_er_plus_hub",
    "powerlaw_pmf",
    "sample_powerlaw_degrees",
    "match_stubs",
    "generate_powerlaw_config",
    "plant_clique",
]

STREAM_ER, STREAM_HUB, STREAM_DEGREES = range(3)


def substreams(seed: int) -> list[np.random.Generator]:
    """The three named child generators derived from ``seed``."""
    children = np.random.SeedSequence(int(seed) & (2**64 - 1)).spawn(3)
    return [np.random.Generator(np.random.PCG64(s)) for s in children]


@dataclass(frozen=True)
class HubModelParams:
    """``n`` counts the hub; the random block has ``n - 1`` nodes."""

    n: int
    c: float
    d: float
    seed: int = 0

    @property
    def p_block(self) -> float:
        return self.c / (self.n - 2)

    @property
    def p_hub(self) -> float:
        return self.d / (self.n - 1)

    def validate(self) -> None:
        if self.n < 3:
            raise ParameterError("hub model needs n >= 3")
        if self.c <= 0:
            raise ParameterError("mean degree c must be positive")
        if self.d < 0:
            raise ParameterError("hub degree d must be non-negative")
        if not 0.0 <= self.p_block <= 1.0:
            raise ParameterError(f"edge probability c/(n-2) = {self.p_block} outside [0, 1]")
        if not 0.0 <= self.p_hub <= 1.0:
            raise ParameterError(f"hub probability d/(n-1) = {self.p_hub} outside [0, 1]")


@dataclass(frozen=True)
class PowerLawParams:
    n: int
    alpha: float
    k_min: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.alpha <= 2:
            raise ParameterError("power-law exponent must exceed 2 (finite mean degree)")
        if self.k_min < 1:
            raise ParameterError("k_min must be at least 1")
        if self.n < 2 or self.k_min > self.n - 1:
            raise ParameterError("need n >= 2 and k_min <= n - 1")


def _unrank_pairs(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map ranks ``k = j(j-1)/2 + i`` (``i < j``) back to pairs ``(i, j)``."""
    j = ((1.0 + np.sqrt(1.0 + 8.0 * keys.astype(np.float64))) / 2.0).astype(np.int64)
    # float rounding can be off by one either way
    j -= (j * (j - 1) // 2) > keys
    j += ((j + 1) * j // 2) <= keys
    i = keys - j * (j - 1) // 2
    return i, j


def erdos_renyi_edges(n: int, p: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Edges of G(n, p) as ``(i, j)`` arrays with ``i < j``, sorted by rank.

    Draws the edge count from Binomial(n(n-1)/2, p) and then a uniformly
    random subset of pair ranks of that size, which is exactly G(n, p).
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability {p} outside [0, 1]")
    pairs = n * (n - 1) // 2
    if pairs == 0 or p == 0.0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    count = int(rng.binomial(pairs, p))
    if count > pairs // 2:
        keys = np.sort(rng.choice(pairs, size=count, replace=False))
    else:
        keys = np.unique(rng.integers(0, pairs, size=count))
        while keys.size < count:
            extra = rng.integers(0, pairs, size=count - keys.size)
            keys = np.union1d(keys, extra)
    return _unrank_pairs(keys)


def generate_er(n: int, c: float, seed: int = 0) -> Graph:
    """Plain G(n, c/(n-1)) with mean degree ``c``, using the ER substream of ``seed``."""
    if n < 2:
        raise ParameterError("need n >= 2")
    rng = substreams(seed)[STREAM_ER]
    u, v = erdos_renyi_edges(n, c / (n - 1), rng)
    return Graph.from_edges(n, u, v)


def generate_er_plus_hub(params: HubModelParams) -> Graph:
    """Random graph on nodes ``0..n-2`` plus hub node ``n-1``.

    Block edges appear with probability ``c/(n-2)``; the hub attaches to each
    other node independently with probability ``d/(n-1)``.
    """
    params.validate()
    n = params.n
    streams = substreams(params.seed)
    u, v = erdos_renyi_edges(n - 1, params.p_block, streams[STREAM_ER])
    hub_nbrs = np.flatnonzero(streams[STREAM_HUB].random(n - 1) < params.p_hub)
    hub = np.full(hub_nbrs.size, n - 1, dtype=np.int64)
    return Graph.from_edges(n, np.concatenate([u, hub_nbrs]), np.concatenate([v, hub]))


def powerlaw_pmf(alpha: float, k_min: int, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and probabilities of ``p_k ~ k**-alpha`` on ``k_min..k_max``."""
    ks = np.arange(k_min, k_max + 1, dtype=np.int64)
    w = ks.astype(np.float64) ** -alpha
    return ks, w / w.sum()


def sample_powerlaw_degrees(params: PowerLawParams, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. degrees by inverse CDF over the truncated distribution, with even sum.

    If the sum is odd, one uniformly chosen node's degree is incremented.
    """
    ks, pk = powerlaw_pmf(params.alpha, params.k_min, params.n - 1)
    cdf = np.cumsum(pk)
    cdf[-1] = 1.0
    deg = ks[np.searchsorted(cdf, rng.random(params.n), side="right")]
    if deg.sum() % 2:
        deg[rng.integers(params.n)] += 1
    return deg


def match_stubs(degrees: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniform stub matching; returns the raw (multi)edge list including loops."""
    stubs = np.repeat(np.arange(degrees.size, dtype=np.int64), degrees)
    if stubs.size % 2:
        raise ParameterError("degree sum must be even")
    rng.shuffle(stubs)
    return stubs[0::2], stubs[1::2]


def generate_powerlaw_config(params: PowerLawParams) -> Graph:
    """Erased configuration model with power-law degrees.

    Self-loops and repeated edges from the stub matching are discarded, so
    realized degrees can fall slightly below the sampled ones.
    """
    params.validate()
    rng = substreams(params.seed)[STREAM_DEGREES]
    deg = sample_powerlaw_degrees(params, rng)
    u, v = match_stubs(deg, rng)
    return Graph.from_edges(params.n, u, v)


def powerlaw_mean_degree(alpha: float, k_min: int, k_max: int) -> float:
    ks, pk = powerlaw_pmf(alpha, k_min, k_max)
    return float((ks * pk).sum())


def plant_clique(graph: Graph, k: int, seed: int = 0) -> tuple[Graph, np.ndarray]:
    """Add all edges among ``k`` uniformly chosen nodes; returns the graph and the clique's nodes."""
    if not 2 <= k <= graph.n:
        raise ParameterError("clique size must be in [2, n]")
    rng = np.random.Generator(np.random.PCG64(seed))
    nodes = np.sort(rng.choice(graph.n, size=k, replace=False))
    iu, ju = np.triu_indices(k, 1)
    u, v = graph.edges()
    return (
        Graph.from_edges(graph.n, np.concatenate([u, nodes[iu]]), np.concatenate([v, nodes[ju]]), graph.labels),
        nodes,
    )


def expected_max_degree(n: int, alpha: float) -> float:
    """Natural cutoff scale ``n**(1/(alpha-1))`` of the largest degree."""
    return math.pow(n, 1.0 / (alpha - 1.0))
