"""Eigenvector and nonbacktracking centrality on sparse graphs, with localization diagnostics."""

__version__ = "0.1.0"

from .analysis import (
    LocalizationReport,
    group_means,
    inverse_participation_ratio,
    localization_report,
    localization_verdict,
)
from .centrality import (
    CentralityVector,
    degree_centrality,
    eigenvector_centrality,
    nb_centrality_oracle,
    nonbacktracking_centrality,
)
from .errors import (
    DegenerateResultError,
    DisconnectedGraphError,
    EmptyGraphError,
    GraphError,
    NBCentralityError,
    ParameterError,
    ParseError,
)
from .generators import HubModelParams, PowerLawParams, generate_er_plus_hub, generate_powerlaw_config
from .graph import DegreeStats, Graph, degree_stats, largest_component, parse_edge_list, read_edge_list
from .spectral import EigenResult, dense_leading_eigenpair, power_iteration
from .theory import hub_predictions, nb_leading_eigenvalue, stieltjes_transform

__all__ = [
    "CentralityVector",
    "DegenerateResultError",
    "DegreeStats",
    "DisconnectedGraphError",
    "EigenResult",
    "EmptyGraphError",
    "Graph",
    "GraphError",
    "HubModelParams",
    "LocalizationReport",
    "NBCentralityError",
    "ParameterError",
    "ParseError",
    "PowerLawParams",
    "degree_centrality",
    "degree_stats",
    "dense_leading_eigenpair",
    "eigenvector_centrality",
    "generate_er_plus_hub",
    "generate_powerlaw_config",
    "group_means",
    "hub_predictions",
    "inverse_participation_ratio",
    "largest_component",
    "localization_report",
    "localization_verdict",
    "nb_centrality_oracle",
    "nb_leading_eigenvalue",
    "nonbacktracking_centrality",
    "parse_edge_list",
    "power_iteration",
    "read_edge_list",
    "stieltjes_transform",
]
