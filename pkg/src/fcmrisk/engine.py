"""Evaluation pipeline shared by the CLI and the service.

One code path produces the machine-readable result document (the payload
the UI consumes), so command-line and service outputs are bit-identical for
identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import analytics
from .choquet import TNorm, evaluate_hierarchy, effective_values
from .elicitation import ExpertEvaluation, MergedMatrix, merge_evaluations, temporal_update
from .errors import SchemaError, UnknownNodeError
from .model import Edge, FcmGraph, RiskNode, validate_connectivity


@dataclass(frozen=True)
class RunConfig:
    """Evaluation parameters; paths are echo-only metadata."""

    k: int = 2
    tnorm: TNorm = TNorm.PRODUCT
    smoothing: float = 0.7
    precision: int = 2
    hierarchy_path: str | None = None
    expert_paths: tuple[str, ...] = field(default_factory=tuple)
    prev_path: str | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SchemaError(f"horizon k must be >= 1, got {self.k}")
        if not 0.0 <= self.smoothing <= 1.0:
            raise SchemaError(
                f"smoothing must lie in [0, 1], got {self.smoothing}"
            )
        if self.precision < 0:
            raise SchemaError(f"precision must be >= 0, got {self.precision}")

    def echo(self) -> dict[str, Any]:
        # input paths stay out of machine documents: the CLI and the service
        # must emit bit-identical results for the same semantic inputs
        return {
            "k": self.k,
            "tnorm": self.tnorm.value,
            "lambda": self.smoothing,
            "precision": self.precision,
        }


def apply_merged(base: FcmGraph, merged: MergedMatrix) -> FcmGraph:
    """Overlay merged entries on a hierarchy: diagonal entries set node
    values, off-diagonal entries set edge weights (replacing same-pair edges
    the base already had)."""
    for src, dst in merged.entries:
        for nid in (src, dst):
            if nid not in base:
                raise UnknownNodeError(f"merged entry references unknown node {nid!r}")
    values = {n.id: n.value for n in base.nodes()}
    weights = {e.pair: e.weight for e in base.edges()}
    for (src, dst), weight in merged.entries.items():
        if src == dst:
            if not 0.0 <= weight <= 1.0:
                raise SchemaError(f"merged value for {src!r} outside [0, 1]")
            values[src] = weight
        else:
            weights[(src, dst)] = weight
    nodes = [
        RiskNode(n.id, n.label, n.level, n.parent, values[n.id])
        for n in base.nodes()
    ]
    edges = [Edge(src, dst, w) for (src, dst), w in sorted(weights.items())]
    return FcmGraph(nodes, edges, timestamp=base.timestamp)


def merge_round(
    base: FcmGraph,
    evaluations: Sequence[ExpertEvaluation],
    previous: MergedMatrix | None,
    config: RunConfig,
) -> tuple[FcmGraph, MergedMatrix]:
    """Merge expert evaluations (and smooth against the previous round) into
    an evaluable graph."""
    merged = merge_evaluations(evaluations, node_ids=base.node_ids)
    if previous is not None:
        merged = temporal_update(previous, merged, config.smoothing)
    return apply_merged(base, merged), merged


def result_document(
    graph: FcmGraph,
    config: RunConfig,
    reference: Mapping[str, Mapping[str, float]] | None = None,
) -> dict[str, Any]:
    """Evaluate the graph end to end and assemble the canonical result.

    Carries supplied values, aggregates, effective values, per-node metrics,
    per-target path contributions, densities, and a config echo. Full float
    precision; rounding happens only at presentation layers.
    """
    results = evaluate_hierarchy(graph, config.k, config.tnorm)
    effective = effective_values(graph, results)
    metrics = analytics.compute_metrics(
        graph, config.k, config.tnorm, extended=True
    )
    labels = analytics.classify_nodes(analytics.degrees(graph))

    nodes_out = []
    for node in graph.nodes():
        m = metrics[node.id]
        label = labels[node.id]
        aggregate = results[node.id].value if node.id in results else None
        nodes_out.append(
            {
                "id": node.id,
                "label": node.label,
                "level": node.level,
                "parent": node.parent,
                "value": node.value,
                "aggregate": aggregate,
                "effective": effective.get(node.id),
                "in_degree": m.in_degree,
                "out_degree": m.out_degree,
                "centrality": m.centrality,
                "extended_in": m.extended_in,
                "extended_out": m.extended_out,
                "vulnerability": m.vulnerability,
                "classification": m.classification,
                "in_rank": label.in_rank,
                "out_rank": label.out_rank,
                "centrality_rank": label.centrality_rank,
            }
        )

    contributions = {
        target: [
            {
                "path": list(c.path.node_ids),
                "measure": c.weight,
                "risk": c.risk,
                "product": c.product,
            }
            for c in result.contributions
        ]
        for target, result in results.items()
    }

    root = graph.root_id
    systemic = results[root].value if root in results else effective.get(root)

    doc: dict[str, Any] = {
        "config": config.echo(),
        "timestamp": graph.timestamp,
        "root": root,
        "systemic_risk": systemic,
        "nodes": nodes_out,
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": e.weight} for e in graph.edges()
        ],
        "contributions": contributions,
        "analytics": {
            "density": analytics.density(graph) if len(graph) > 1 else None,
            "density_weighted": (
                analytics.density(graph, weighted=True) if len(graph) > 1 else None
            ),
            "density_hierarchy": (
                analytics.density(graph, hierarchy_adjusted=True)
                if len(graph) > 1
                else None
            ),
            "density_hierarchy_weighted": (
                analytics.density(graph, weighted=True, hierarchy_adjusted=True)
                if len(graph) > 1
                else None
            ),
        },
        "violations": [
            {"node": v.node, "missing_edge": list(v.missing_edge)}
            for v in validate_connectivity(graph)
        ],
    }
    if reference:
        doc["reference"] = {
            row: dict(sorted(cells.items())) for row, cells in reference.items()
        }
    return doc


@dataclass(frozen=True)
class Overrides:
    """What-if replacements for node values and existing edge weights."""

    node_values: Mapping[str, float] = field(default_factory=dict)
    edge_weights: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for nid, value in self.node_values.items():
            if not 0.0 <= value <= 1.0:
                raise SchemaError(
                    f"override for node {nid!r}: {value} outside [0, 1]"
                )
        for (src, dst), weight in self.edge_weights.items():
            if not 0.0 <= weight <= 1.0:
                raise SchemaError(
                    f"override for edge {src!r}->{dst!r}: {weight} outside [0, 1]"
                )

    def __bool__(self) -> bool:
        return bool(self.node_values) or bool(self.edge_weights)


def what_if(
    graph: FcmGraph,
    overrides: Overrides,
    config: RunConfig,
    reference: Mapping[str, Mapping[str, float]] | None = None,
) -> dict[str, Any]:
    """Recompute the full result under overrides and report per-node deltas.

    The base graph is untouched; deltas compare effective values (and the
    aggregate where one exists) before and after.
    """
    before = result_document(graph, config, reference)
    after_graph = graph.with_overrides(
        node_values=overrides.node_values, edge_weights=overrides.edge_weights
    )
    after = result_document(after_graph, config, reference)

    deltas = {}
    after_nodes = {n["id"]: n for n in after["nodes"]}
    for node in before["nodes"]:
        nid = node["id"]
        post = after_nodes[nid]
        entry: dict[str, Any] = {}
        for key in ("effective", "aggregate"):
            a, b = node[key], post[key]
            entry[key] = {
                "before": a,
                "after": b,
                "delta": None if a is None or b is None else b - a,
            }
        deltas[nid] = entry

    sr_before = before["systemic_risk"]
    sr_after = after["systemic_risk"]
    return {
        "config": config.echo(),
        "overrides": {
            "nodes": dict(sorted(overrides.node_values.items())),
            "edges": [
                {"src": src, "dst": dst, "weight": w}
                for (src, dst), w in sorted(overrides.edge_weights.items())
            ],
        },
        "before": before,
        "after": after,
        "deltas": deltas,
        "systemic_risk": {
            "before": sr_before,
            "after": sr_after,
            "delta": (
                None
                if sr_before is None or sr_after is None
                else sr_after - sr_before
            ),
        },
    }
