"""Systemic-risk estimation from expert evaluations.

The financial system is modeled as a hierarchical fuzzy cognitive map;
expert-provided vulnerabilities and impact weights aggregate into a single
systemic-risk value via Choquet integrals over normalized path measures.
"""

__version__ = "0.1.0"

from .analytics import (
    NodeClassification,
    NodeMetrics,
    classify_nodes,
    compute_metrics,
    degrees,
    density,
    extended_degrees,
    metrics_csv,
    node_vulnerability,
)
from .choquet import (
    AggregationResult,
    ForecastPoint,
    FuzzyMeasure,
    PathContribution,
    TNorm,
    aggregate_node,
    build_path_measure,
    choquet_2additive,
    choquet_general,
    effective_values,
    evaluate_hierarchy,
    forecast,
)
from .elicitation import (
    EntrySupport,
    ExpertEvaluation,
    FeedbackRecord,
    MergedMatrix,
    feedback_report,
    merge_evaluations,
    temporal_update,
)
from .engine import Overrides, RunConfig, merge_round, result_document, what_if
from .errors import (
    EvaluationOrderError,
    FcmError,
    MeasureError,
    MissingValueError,
    NoPathsError,
    SchemaError,
    UniverseMismatchError,
    UnknownNodeError,
)
from .model import (
    ConnectivityViolation,
    Edge,
    FcmGraph,
    RiskNode,
    RiskPath,
    build_graph,
    enumerate_paths,
    enumerate_paths_from,
    validate_connectivity,
)

__all__ = [
    "AggregationResult",
    "ConnectivityViolation",
    "Edge",
    "EntrySupport",
    "EvaluationOrderError",
    "ExpertEvaluation",
    "FcmError",
    "FcmGraph",
    "FeedbackRecord",
    "ForecastPoint",
    "FuzzyMeasure",
    "MeasureError",
    "MergedMatrix",
    "MissingValueError",
    "NoPathsError",
    "NodeClassification",
    "NodeMetrics",
    "Overrides",
    "PathContribution",
    "RiskNode",
    "RiskPath",
    "RunConfig",
    "SchemaError",
    "TNorm",
    "UniverseMismatchError",
    "UnknownNodeError",
    "aggregate_node",
    "build_graph",
    "build_path_measure",
    "choquet_2additive",
    "choquet_general",
    "classify_nodes",
    "compute_metrics",
    "degrees",
    "density",
    "effective_values",
    "enumerate_paths",
    "enumerate_paths_from",
    "evaluate_hierarchy",
    "extended_degrees",
    "feedback_report",
    "forecast",
    "merge_evaluations",
    "merge_round",
    "metrics_csv",
    "node_vulnerability",
    "result_document",
    "temporal_update",
    "validate_connectivity",
    "what_if",
]
