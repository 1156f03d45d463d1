"""Localization diagnostics: inverse participation ratio, hub group means, verdicts."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .centrality import CentralityVector
from .errors import DegenerateResultError, GraphError
from .graph import Graph

__all__ = [
    "GroupMeans",
    "LocalizationReport",
    "inverse_participation_ratio",
    "group_means",
    "default_hub",
    "localization_verdict",
    "localization_report",
    "DEFAULT_VERDICT_FACTOR",
]

DEFAULT_VERDICT_FACTOR = 10.0


def _values(vec) -> np.ndarray:
    return np.asarray(vec.scores if isinstance(vec, CentralityVector) else vec, dtype=np.float64)


def inverse_participation_ratio(vec) -> float:
    """``S = sum_i v_i^4`` of the unit-L2 rescaled vector.

    Lies in ``[1/n, 1]``: ``1/n`` for a uniform vector, 1 for a single spike.
    """
    v = _values(vec)
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.isfinite(norm):
        raise DegenerateResultError("inverse participation ratio of a zero vector is undefined")
    v = v / norm
    return float(np.sum(v**4))


@dataclass(frozen=True)
class GroupMeans:
    """Mean score of the hub, of its neighbours, and of everything else.

    A group that is empty has mean ``None``.
    """

    hub: float
    hub_neighbors: Optional[float]
    others: Optional[float]
    n_neighbors: int
    n_others: int


def default_hub(graph: Graph) -> int:
    """Maximum-degree node, smallest index on ties."""
    if graph.n == 0:
        raise GraphError("graph has no nodes")
    return int(np.argmax(graph.degrees))


def group_means(graph: Graph, vec, hub_node: Optional[int] = None) -> GroupMeans:
    v = _values(vec)
    if v.size != graph.n:
        raise GraphError("vector length differs from node count")
    hub = default_hub(graph) if hub_node is None else int(hub_node)
    if not 0 <= hub < graph.n:
        raise GraphError(f"hub node {hub} out of range")
    nbrs = graph.neighbors(hub)
    mask = np.ones(graph.n, dtype=bool)
    mask[hub] = False
    mask[nbrs] = False
    others = v[mask]
    return GroupMeans(
        hub=float(v[hub]),
        hub_neighbors=float(v[nbrs].mean()) if nbrs.size else None,
        others=float(others.mean()) if others.size else None,
        n_neighbors=int(nbrs.size),
        n_others=int(others.size),
    )


def localization_verdict(ipr: float, n: int, threshold_factor: float = DEFAULT_VERDICT_FACTOR) -> bool:
    """True when ``ipr > threshold_factor / sqrt(n)``.

    A heuristic cut between the ``O(1/n)`` scale of a delocalized vector and
    the ``O(1)`` scale of a localized one, geometric-mean placed.
    """
    if n < 1:
        raise GraphError("n must be positive")
    return ipr > threshold_factor / math.sqrt(n)


@dataclass
class LocalizationReport:
    method: str
    n: int
    ipr: float
    group_means: GroupMeans
    hub_node: int
    localized: bool
    threshold_factor: float
    eigenvalue: Optional[float] = None
    threshold_context: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def csv_row(self) -> dict:
        gm = self.group_means
        return {
            "method": self.method,
            "n": self.n,
            "ipr": self.ipr,
            "hub_node": self.hub_node,
            "hub_mean": gm.hub,
            "neighbor_mean": gm.hub_neighbors,
            "other_mean": gm.others,
            "localized": self.localized,
            "eigenvalue": self.eigenvalue,
        }


def localization_report(
    graph: Graph,
    vec: CentralityVector,
    hub_node: Optional[int] = None,
    threshold_factor: float = DEFAULT_VERDICT_FACTOR,
    threshold_context: Optional[dict] = None,
) -> LocalizationReport:
    ipr = inverse_participation_ratio(vec)
    hub = default_hub(graph) if hub_node is None else int(hub_node)
    return LocalizationReport(
        method=vec.method,
        n=graph.n,
        ipr=ipr,
        group_means=group_means(graph, vec, hub),
        hub_node=hub,
        localized=localization_verdict(ipr, graph.n, threshold_factor),
        threshold_factor=threshold_factor,
        eigenvalue=vec.eigenvalue,
        threshold_context=threshold_context or {},
    )
