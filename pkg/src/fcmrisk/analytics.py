"""Graph-theoretic risk analytics over the map.

Degree-based measures only: weighted in/out degrees, centrality as their
sum, density in plain / weighted / hierarchy-adjusted variants, k-path
extended degrees, and Choquet node vulnerability. Receiver nodes absorb
more risk than they emit; transmitters the opposite.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .choquet import (
    TNorm,
    aggregate_node,
    evaluate_hierarchy,
)
from .errors import MissingValueError, NoPathsError
from .model import FcmGraph, enumerate_paths, enumerate_paths_from

RECEIVER = "receiver"
TRANSMITTER = "transmitter"
ORDINARY = "ordinary"


@dataclass(frozen=True)
class NodeMetrics:
    node: str
    level: int
    in_degree: float
    out_degree: float
    centrality: float
    vulnerability: float | None = None
    classification: str | None = None
    extended_in: float | None = None
    extended_out: float | None = None


@dataclass(frozen=True)
class NodeClassification:
    """Receiver/transmitter label plus rankings inside the chosen scope."""

    node: str
    classification: str
    in_rank: int
    out_rank: int
    centrality_rank: int


def density(
    graph: FcmGraph, weighted: bool = False, hierarchy_adjusted: bool = False
) -> float:
    """Interconnectedness of the map in [0, 1].

    Plain: edge count over N(N-1). Weighted: edge-weight sum instead of the
    count. Hierarchy-adjusted: both numerator and denominator restricted to
    the pairs the hierarchy template permits (siblings both ways, child to
    parent), so the value stays a completeness ratio even when the data
    carries extra links.
    """
    n = len(graph)
    if n < 2:
        raise ValueError("density needs at least 2 nodes")
    edges = graph.edges()
    if hierarchy_adjusted:
        permitted: set[tuple[str, str]] = set()
        by_parent: dict[str, list[str]] = {}
        for node in graph.nodes():
            if node.parent is not None:
                permitted.add((node.id, node.parent))
                by_parent.setdefault(node.parent, []).append(node.id)
        for siblings in by_parent.values():
            for a in siblings:
                for b in siblings:
                    if a != b:
                        permitted.add((a, b))
        edges = tuple(e for e in edges if e.pair in permitted)
        denominator = len(permitted)
        if denominator == 0:
            raise ValueError("hierarchy template permits no pairs")
    else:
        denominator = n * (n - 1)
    numerator = (
        math.fsum(e.weight for e in edges) if weighted else float(len(edges))
    )
    return numerator / denominator


def degrees(graph: FcmGraph) -> dict[str, NodeMetrics]:
    """Weighted in/out degree and centrality (their sum) per node."""
    out: dict[str, NodeMetrics] = {}
    for nid in graph.node_ids:
        in_degree = math.fsum(e.weight for e in graph.in_edges(nid))
        out_degree = math.fsum(e.weight for e in graph.out_edges(nid))
        out[nid] = NodeMetrics(
            node=nid,
            level=graph.node(nid).level,
            in_degree=in_degree,
            out_degree=out_degree,
            centrality=in_degree + out_degree,
        )
    return out


def extended_degrees(
    graph: FcmGraph, k: int = 2, tnorm: TNorm = TNorm.PRODUCT
) -> dict[str, tuple[float, float]]:
    """Degrees extended over simple paths of length <= k.

    Each path contributes its t-norm-folded weight, so indirect neighbourhood
    effects count; k = 1 reduces to the plain degrees.
    """
    out: dict[str, tuple[float, float]] = {}
    for nid in graph.node_ids:
        ext_in = math.fsum(
            tnorm.fold(e.weight for e in p.edges)
            for p in enumerate_paths(graph, nid, k)
        )
        ext_out = math.fsum(
            tnorm.fold(e.weight for e in p.edges)
            for p in enumerate_paths_from(graph, nid, k)
        )
        out[nid] = (ext_in, ext_out)
    return out


def node_vulnerability(
    graph: FcmGraph, node_id: str, k: int = 2, tnorm: TNorm = TNorm.PRODUCT
) -> float:
    """Choquet aggregate of risk flowing into a node within k steps.

    For the root this is the systemic-risk value itself. Unvalued
    intermediate nodes are resolved bottom-up when necessary.
    """
    try:
        return aggregate_node(graph, node_id, k, tnorm).value
    except MissingValueError:
        results = evaluate_hierarchy(graph, k, tnorm)
        if node_id not in results:
            raise NoPathsError(
                f"no usable transmission paths end at {node_id!r}"
            ) from None
        return results[node_id].value


def classify_nodes(
    metrics: Mapping[str, NodeMetrics] | Iterable[NodeMetrics],
    scope: int | None = None,
) -> dict[str, NodeClassification]:
    """Label nodes receiver/transmitter/ordinary and rank them.

    Scope ``None`` compares across the whole map; an integer restricts
    comparison (and ranks) to that hierarchy level. Ranks are 1-based,
    descending on the ranked quantity, ties broken by node id.
    """
    rows = list(metrics.values()) if isinstance(metrics, Mapping) else list(metrics)
    if scope is not None:
        rows = [m for m in rows if m.level == scope]
    rows.sort(key=lambda m: m.node)

    def ranks(key) -> dict[str, int]:
        ordered = sorted(rows, key=lambda m: (-key(m), m.node))
        return {m.node: i + 1 for i, m in enumerate(ordered)}

    in_ranks = ranks(lambda m: m.in_degree)
    out_ranks = ranks(lambda m: m.out_degree)
    centrality_ranks = ranks(lambda m: m.centrality)

    out: dict[str, NodeClassification] = {}
    for m in rows:
        if m.in_degree > m.out_degree:
            label = RECEIVER
        elif m.out_degree > m.in_degree:
            label = TRANSMITTER
        else:
            label = ORDINARY
        out[m.node] = NodeClassification(
            node=m.node,
            classification=label,
            in_rank=in_ranks[m.node],
            out_rank=out_ranks[m.node],
            centrality_rank=centrality_ranks[m.node],
        )
    return out


def compute_metrics(
    graph: FcmGraph,
    k: int = 2,
    tnorm: TNorm = TNorm.PRODUCT,
    extended: bool = False,
) -> dict[str, NodeMetrics]:
    """Degrees, vulnerability at horizon k, global classification, and
    (optionally) k-path extended degrees for every node."""
    metrics = degrees(graph)
    results = evaluate_hierarchy(graph, k, tnorm)
    labels = classify_nodes(metrics)
    ext = extended_degrees(graph, k, tnorm) if extended else {}
    out: dict[str, NodeMetrics] = {}
    for nid, m in metrics.items():
        vulnerability = results[nid].value if nid in results else None
        ext_in, ext_out = ext.get(nid, (None, None))
        out[nid] = replace(
            m,
            vulnerability=vulnerability,
            classification=labels[nid].classification,
            extended_in=ext_in,
            extended_out=ext_out,
        )
    return out


def metrics_csv(metrics: Mapping[str, NodeMetrics], extended: bool = False) -> str:
    """Metrics as a CSV table, full precision, canonical node order."""
    buffer = io.StringIO()
    columns = ["node", "level", "in", "out", "centrality", "vulnerability_k", "class"]
    if extended:
        columns += ["ext_in", "ext_out"]
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for nid in sorted(metrics):
        m = metrics[nid]
        row = [
            m.node,
            m.level,
            repr(m.in_degree),
            repr(m.out_degree),
            repr(m.centrality),
            "" if m.vulnerability is None else repr(m.vulnerability),
            m.classification or "",
        ]
        if extended:
            row += [
                "" if m.extended_in is None else repr(m.extended_in),
                "" if m.extended_out is None else repr(m.extended_out),
            ]
        writer.writerow(row)
    return buffer.getvalue()
