"""Closed-form random-matrix predictions for the hub model and nonbacktracking spectra.

Every function is total over its documented domain. Quantities that do not
exist for given parameters (e.g. the hub eigenvalue when ``d <= c``) are
returned as ``None`` with the reason recorded, so sweep code never has to
guard against exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import BranchError, ParameterError
from .graph import DegreeStats

__all__ = [
    "HubTheory",
    "stieltjes_transform",
    "stieltjes_derivative",
    "hub_predictions",
    "hub_weight_from_stieltjes",
    "nb_leading_eigenvalue",
    "nb_leading_eigenvalue_with_hub",
    "powerlaw_localization_predicted",
    "spectral_bounds",
    "POWERLAW_CRITICAL_ALPHA",
]

POWERLAW_CRITICAL_ALPHA = 2.5


def _check_branch(z: float, c: float) -> float:
    if c <= 0:
        raise ParameterError("c must be positive")
    disc = z * z - 4.0 * c
    edge = 2.0 * math.sqrt(c)
    if math.isclose(z, edge, rel_tol=1e-14):
        return 0.0
    if z < edge:
        raise BranchError(f"z = {z} lies inside the semicircle [-{edge}, {edge}]")
    return max(disc, 0.0)


def stieltjes_transform(z: float, c: float) -> float:
    """Semicircle Stieltjes transform ``g(z) = (z - sqrt(z^2 - 4c)) / 2c`` for ``z >= 2 sqrt(c)``."""
    disc = _check_branch(z, c)
    return (z - math.sqrt(disc)) / (2.0 * c)


def stieltjes_derivative(z: float, c: float) -> float:
    """``g'(z) = (1 - z / sqrt(z^2 - 4c)) / 2c``; ``-inf`` at the band edge."""
    disc = _check_branch(z, c)
    if disc == 0.0:
        return -math.inf
    return (1.0 - z / math.sqrt(disc)) / (2.0 * c)


@dataclass(frozen=True)
class HubTheory:
    """Predictions for a random graph of mean degree ``c`` plus one hub of degree ``d``.

    ``z1`` is the random block's own leading eigenvalue, ``z2`` the eigenvalue
    the hub creates, ``d_threshold`` the hub degree at which they cross.
    ``hub_weight_sq`` is the squared hub entry of the unit eigenvector in the
    localized phase; the mean over hub neighbours is
    ``sqrt(hub_weight_sq) * neighbor_mean_factor`` and the mean over all other
    nodes is ``nonhub_mean_prefactor / (n - 1)``.
    """

    c: float
    d: float
    z1: float
    d_threshold: float
    z2: Optional[float] = None
    hub_weight_sq: Optional[float] = None
    neighbor_mean_factor: Optional[float] = None
    nonhub_mean_prefactor: Optional[float] = None
    absent: dict = field(default_factory=dict)

    @property
    def localized(self) -> bool:
        """Hub eigenvalue leads (strict inequality)."""
        return self.d > self.d_threshold

    @property
    def hub_score(self) -> Optional[float]:
        return None if self.hub_weight_sq is None else math.sqrt(self.hub_weight_sq)

    @property
    def neighbor_mean(self) -> Optional[float]:
        if self.hub_weight_sq is None:
            return None
        return math.sqrt(self.hub_weight_sq) * self.neighbor_mean_factor

    def nonhub_mean(self, n: int) -> Optional[float]:
        if self.nonhub_mean_prefactor is None:
            return None
        return self.nonhub_mean_prefactor / (n - 1)

    @property
    def leading_eigenvalue(self) -> float:
        return self.z2 if self.localized and self.z2 is not None else self.z1


def hub_predictions(c: float, d: float) -> HubTheory:
    if c <= 0:
        raise ParameterError("c must be positive")
    if d < 0:
        raise ParameterError("d must be non-negative")
    absent = {}
    z2 = neighbor_factor = weight_sq = prefactor = None
    if d > c:
        z2 = d / math.sqrt(d - c)
        neighbor_factor = 1.0 / math.sqrt(d - c)
    else:
        absent["z2"] = absent["neighbor_mean_factor"] = "requires d > c"
    if d > 2 * c:
        weight_sq = (d - 2 * c) / (2 * d - 2 * c)
        prefactor = d * math.sqrt(weight_sq) / math.sqrt(d - c)
    else:
        reason = "requires d > 2c (hub eigenvalue merges into the semicircle band)"
        absent["hub_weight_sq"] = absent["nonhub_mean_prefactor"] = reason
    return HubTheory(
        c=c,
        d=d,
        z1=c + 1.0,
        d_threshold=c * (c + 1.0),
        z2=z2,
        hub_weight_sq=weight_sq,
        neighbor_mean_factor=neighbor_factor,
        nonhub_mean_prefactor=prefactor,
        absent=absent,
    )


def hub_weight_from_stieltjes(c: float, d: float) -> float:
    """``1 / (1 - d g'(z2))`` evaluated numerically through :func:`stieltjes_derivative`."""
    z2 = d / math.sqrt(d - c)
    return 1.0 / (1.0 - d * stieltjes_derivative(z2, c))


def nb_leading_eigenvalue(stats: DegreeStats) -> float:
    """``(<k^2> - <k>) / <k>``: the nonbacktracking leading eigenvalue of an uncorrelated graph."""
    if stats.mean <= 0:
        raise ParameterError("mean degree must be positive")
    return (stats.second_moment - stats.mean) / stats.mean


def nb_leading_eigenvalue_with_hub(stats: DegreeStats, d: float) -> float:
    """Hub-corrected ``[(n-1)(<k^2> - <k>) + (d-1)d] / 2m``.

    ``stats`` describes the ``n - 1`` non-hub nodes; ``2m`` counts the hub's
    edges as well.
    """
    if stats.mean <= 0:
        raise ParameterError("mean degree must be positive")
    two_m = stats.n * stats.mean + d
    return (stats.n * (stats.second_moment - stats.mean) + (d - 1.0) * d) / two_m


def powerlaw_localization_predicted(alpha: float) -> bool:
    """Whether eigenvector centrality localizes on hubs for exponent ``alpha``.

    Boundary ``alpha == 2.5`` counts as not localized.
    """
    if alpha <= 2:
        raise ParameterError("alpha must exceed 2")
    return alpha > POWERLAW_CRITICAL_ALPHA


def spectral_bounds(stats: Optional[DegreeStats] = None, clique_size: Optional[int] = None,
                    max_degree: Optional[int] = None) -> tuple[Optional[float], Optional[float]]:
    """Lower bounds ``(sqrt(d_max), k - 2)`` on the adjacency and nonbacktracking leading eigenvalues.

    The first needs the maximum degree (from ``stats`` or ``max_degree``), the
    second a clique size ``k >= 2``; either is ``None`` when not supplied.
    """
    if max_degree is None and stats is not None:
        max_degree = stats.max_degree
    rayleigh = None if max_degree is None else math.sqrt(max_degree)
    clique = None
    if clique_size is not None:
        if clique_size < 2:
            raise ParameterError("clique size must be at least 2")
        clique = float(clique_size - 2)
    return rayleigh, clique
