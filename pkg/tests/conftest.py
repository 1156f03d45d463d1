import networkx as nx
import numpy as np
import pytest

from nbcentrality.graph import Graph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def from_nx(g) -> Graph:
    g = nx.convert_node_labels_to_integers(g)
    u, v = (np.array(list(g.edges())).T if g.number_of_edges() else (np.empty(0, int), np.empty(0, int)))
    return Graph.from_edges(g.number_of_nodes(), u, v)


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=int), np.arange(1, leaves + 1))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, np.arange(n), (np.arange(n) + 1) % n)


def complete(n: int) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    return Graph.from_edges(n, iu, ju)


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def star4():
    return star(4)


@pytest.fixture
def cycle5():
    return cycle(5)


@pytest.fixture
def petersen():
    return from_nx(nx.petersen_graph())


@pytest.fixture
def grid3():
    return from_nx(nx.grid_2d_graph(3, 3))


@pytest.fixture(scope="session")
def hub_ensemble():
    """ER+hub graphs (n=1e5, c=10, d=120, seeds 0..4) with their eigenvector centralities."""
    from nbcentrality.centrality import eigenvector_centrality
    from nbcentrality.experiments import DEFAULT_SEEDS
    from nbcentrality.generators import HubModelParams, generate_er_plus_hub

    out = []
    for seed in DEFAULT_SEEDS:
        g = generate_er_plus_hub(HubModelParams(100_000, 10, 120, seed))
        out.append((g, eigenvector_centrality(g, seed=seed, largest_component=True)))
    return out
