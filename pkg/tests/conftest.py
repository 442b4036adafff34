from __future__ import annotations

import random
from importlib import resources

import pytest

from fcmrisk import Edge, FcmGraph, RiskNode
from fcmrisk.io import GraphDocument, read_graph_file

DATA = resources.files("fcmrisk") / "data"


def two_country_graph(case: int) -> FcmGraph:
    nodes = [
        RiskNode("SR", "System", 0, None),
        RiskNode("C1", "Country 1", 1, "SR", 0.5),
        RiskNode("C2", "Country 2", 1, "SR", 0.3),
    ]
    edges = [Edge("C1", "SR", 0.3), Edge("C2", "SR", 0.8)]
    if case >= 2:
        edges.append(Edge("C2", "C1", 0.6))
    if case >= 3:
        edges.append(Edge("C1", "C2", 0.2))
    return FcmGraph(nodes, edges, timestamp=f"two-country-case{case}")


@pytest.fixture
def case1() -> FcmGraph:
    return two_country_graph(1)


@pytest.fixture
def case2() -> FcmGraph:
    return two_country_graph(2)


@pytest.fixture
def case3() -> FcmGraph:
    return two_country_graph(3)


@pytest.fixture(scope="session")
def giips_doc() -> GraphDocument:
    return read_graph_file(DATA / "giips.json")


@pytest.fixture(scope="session")
def country_doc() -> GraphDocument:
    return read_graph_file(DATA / "country.json")


def data_path(name: str) -> str:
    return str(DATA / name)


def random_graph(
    rng: random.Random,
    max_nodes: int = 6,
    edge_prob: float = 0.5,
    all_valued: bool = True,
) -> FcmGraph:
    """Random flat hierarchy (one root, the rest level 1) with a guaranteed
    in-edge at the root so aggregation is always defined."""
    n = rng.randint(3, max_nodes)
    ids = [f"N{i}" for i in range(n)]
    nodes = [RiskNode("N0", "root", 0, None)]
    for nid in ids[1:]:
        value = rng.random() if all_valued else None
        nodes.append(RiskNode(nid, nid, 1, "N0", value))
    edges = []
    for src in ids:
        for dst in ids:
            if src != dst and rng.random() < edge_prob:
                edges.append(Edge(src, dst, rng.random()))
    if not any(e.dst == "N0" for e in edges):
        src = rng.choice(ids[1:])
        edges.append(Edge(src, "N0", rng.uniform(0.1, 1.0)))
    return FcmGraph(nodes, edges)
