"""Command-line front door.

Exit codes: 0 success, 1 validation failure (violations listed one per
line), 2 schema or I/O failure. All output is deterministic; machine
format is canonical JSON, text format rounds at the configured precision.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .analytics import compute_metrics, metrics_csv
from .choquet import TNorm, forecast as run_forecast
from .elicitation import merge_evaluations, temporal_update
from .engine import Overrides, RunConfig, merge_round, result_document, what_if
from .errors import FcmError, SchemaError
from .io import (
    GraphDocument,
    canonical_json,
    matrix_to_csv,
    merged_to_document,
    parse_matrix_csv,
    read_expert_file,
    read_graph_file,
    read_merged_file,
)
from .model import build_graph, validate_connectivity

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_SCHEMA = 2


class CliFailure(click.ClickException):
    def __init__(self, message: str, exit_code: int) -> None:
        super().__init__(message)
        self.exit_code = exit_code


def _fail_schema(exc: Exception) -> "CliFailure":
    return CliFailure(str(exc), EXIT_SCHEMA)


def _load_document(hierarchy: str, matrix: str | None) -> GraphDocument:
    doc = read_graph_file(hierarchy)
    if matrix is None:
        return doc
    try:
        text = Path(matrix).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {matrix}: {exc}") from exc
    ids, cells = parse_matrix_csv(text)
    declared = {n.id: n for n in doc.graph.nodes()}
    if set(ids) != set(declared):
        missing = sorted(set(declared) - set(ids))
        extra = sorted(set(ids) - set(declared))
        raise SchemaError(
            f"matrix ids do not match the hierarchy (missing {missing}, extra {extra})"
        )
    graph = build_graph(
        [declared[i] for i in ids], cells, timestamp=doc.graph.timestamp
    )
    return GraphDocument(graph=graph, reference=doc.reference)


def _assemble(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    config: RunConfig,
) -> GraphDocument:
    """Load inputs and produce the evaluable graph."""
    doc = _load_document(hierarchy, matrix)
    if not experts:
        if prev is not None:
            raise SchemaError("--prev requires --experts (nothing to update)")
        if not doc.graph.edges() and not doc.graph.values():
            raise SchemaError(
                "no evaluations: the map carries no entries "
                "(pass --experts files or a --matrix)"
            )
        return doc
    evaluations = [read_expert_file(p) for p in experts]
    previous = read_merged_file(prev) if prev is not None else None
    graph, _merged = merge_round(doc.graph, evaluations, previous, config)
    return GraphDocument(graph=graph, reference=doc.reference)


def _config(k: int, tnorm: str, lam: float, **paths) -> RunConfig:
    return RunConfig(k=k, tnorm=TNorm.parse(tnorm), smoothing=lam, **paths)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fmt(value, precision: int) -> str:
    if value is None:
        return "-"
    return f"{value:.{precision}f}"


def _text_report(doc: dict, reference: dict | None, precision: int) -> str:
    lines: list[str] = []
    root = doc["root"]
    lines.append(f"systemic risk ({root}): {_fmt(doc['systemic_risk'], precision)}")
    lines.append(
        "density: plain {} weighted {} hierarchy {}".format(
            _fmt(doc["analytics"]["density"], precision),
            _fmt(doc["analytics"]["density_weighted"], precision),
            _fmt(doc["analytics"]["density_hierarchy"], precision),
        )
    )
    by_level: dict[int, list[dict]] = {}
    for node in doc["nodes"]:
        by_level.setdefault(node["level"], []).append(node)
    ref = reference or {}
    for level in sorted(by_level):
        lines.append("")
        lines.append(f"level {level}")
        header = (
            f"{'node':<14}{'value':>8}{'aggr':>8}{'eff':>8}"
            f"{'out':>8}{'in':>8}{'centr':>8}  class"
        )
        has_ref = any(nid in ref.get("vulnerability", {}) for nid in
                      (n["id"] for n in by_level[level]))
        if has_ref:
            header += "  ref"
        lines.append(header)
        for node in by_level[level]:
            row = (
                f"{node['id']:<14}"
                f"{_fmt(node['value'], precision):>8}"
                f"{_fmt(node['aggregate'], precision):>8}"
                f"{_fmt(node['effective'], precision):>8}"
                f"{_fmt(node['out_degree'], precision):>8}"
                f"{_fmt(node['in_degree'], precision):>8}"
                f"{_fmt(node['centrality'], precision):>8}"
                f"  {node['classification']}"
            )
            if has_ref:
                row += f"  {_fmt(ref.get('vulnerability', {}).get(node['id']), precision)}"
            lines.append(row)
    return "\n".join(lines) + "\n"


@click.group()
@click.version_option(version=__version__, prog_name="fcmrisk")
def main() -> None:
    """Systemic-risk evaluation over hierarchical fuzzy cognitive maps."""


_hierarchy_opt = click.option(
    "--hierarchy", required=True, type=click.Path(), help="Graph document (JSON)."
)
_matrix_opt = click.option(
    "--matrix", default=None, type=click.Path(), help="CSV adjacency matrix."
)
_experts_opt = click.option(
    "--experts", multiple=True, type=click.Path(), help="Expert files (JSON or CSV)."
)
_prev_opt = click.option(
    "--prev", default=None, type=click.Path(), help="Previous-round merged matrix."
)
_k_opt = click.option("--k", default=2, show_default=True, help="Path-length horizon.")
_tnorm_opt = click.option(
    "--tnorm", default="product", show_default=True, help="Path fold: product|min."
)
_lambda_opt = click.option(
    "--lambda", "lam", default=0.7, show_default=True,
    help="Temporal smoothing toward the fresh round.",
)
_format_opt = click.option(
    "--format", "fmt", default="text", show_default=True,
    type=click.Choice(["text", "machine"]),
)
_out_opt = click.option("--out", default=None, type=click.Path(), help="Output path.")


@main.command()
@_hierarchy_opt
@_matrix_opt
@_experts_opt
def validate(hierarchy: str, matrix: str | None, experts: tuple[str, ...]) -> None:
    """Check structure, ranges, and connectivity; exit 0 only when clean."""
    try:
        doc = _load_document(hierarchy, matrix)
        evaluations = [read_expert_file(p) for p in experts]
    except FcmError as exc:
        raise _fail_schema(exc)
    violations: list[str] = []
    for violation in validate_connectivity(doc.graph):
        violations.append(violation.message)
    known = set(doc.graph.node_ids)
    for evaluation in evaluations:
        for src, dst in sorted(evaluation.entries):
            for nid in (src, dst):
                if nid not in known:
                    violations.append(
                        f"expert {evaluation.expert_id!r}: unknown node {nid!r}"
                    )
    if violations:
        for line in violations:
            click.echo(line)
        sys.exit(EXIT_VIOLATIONS)
    click.echo("OK")


@main.command()
@_hierarchy_opt
@_experts_opt
@_prev_opt
@_lambda_opt
@_out_opt
def merge(
    hierarchy: str,
    experts: tuple[str, ...],
    prev: str | None,
    lam: float,
    out: str | None,
) -> None:
    """Merge expert files into one confidence-weighted matrix document."""
    try:
        doc = read_graph_file(hierarchy)
        if not experts:
            raise SchemaError("no evaluations: pass at least one --experts file")
        evaluations = [read_expert_file(p) for p in experts]
        merged = merge_evaluations(evaluations, node_ids=doc.graph.node_ids)
        if prev is not None:
            merged = temporal_update(read_merged_file(prev), merged, lam)
    except FcmError as exc:
        raise _fail_schema(exc)
    _emit(canonical_json(merged_to_document(merged)), out)


@main.command()
@_hierarchy_opt
@_matrix_opt
@_experts_opt
@_prev_opt
@_k_opt
@_tnorm_opt
@_lambda_opt
@_format_opt
@_out_opt
def evaluate(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    k: int,
    tnorm: str,
    lam: float,
    fmt: str,
    out: str | None,
) -> None:
    """Merge, update, aggregate bottom-up, and report per-level tables."""
    try:
        config = _config(
            k, tnorm, lam,
            hierarchy_path=hierarchy, expert_paths=tuple(experts), prev_path=prev,
        )
        doc = _assemble(hierarchy, matrix, experts, prev, config)
        result = result_document(doc.graph, config, doc.reference)
    except FcmError as exc:
        raise _fail_schema(exc)
    if fmt == "machine":
        _emit(canonical_json(result), out)
    else:
        _emit(_text_report(result, doc.reference, config.precision), out)


@main.command()
@_hierarchy_opt
@_matrix_opt
@_experts_opt
@_prev_opt
@_k_opt
@_tnorm_opt
@_lambda_opt
@_format_opt
@_out_opt
@click.option(
    "--set-node", "node_overrides", multiple=True, metavar="ID=VALUE",
    help="Replace a node value.",
)
@click.option(
    "--set-edge", "edge_overrides", multiple=True, metavar="SRC:DST=WEIGHT",
    help="Replace an existing edge weight.",
)
def whatif(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    k: int,
    tnorm: str,
    lam: float,
    fmt: str,
    out: str | None,
    node_overrides: tuple[str, ...],
    edge_overrides: tuple[str, ...],
) -> None:
    """Recompute everything under overrides and print per-node deltas."""
    try:
        config = _config(
            k, tnorm, lam,
            hierarchy_path=hierarchy, expert_paths=tuple(experts), prev_path=prev,
        )
        doc = _assemble(hierarchy, matrix, experts, prev, config)
        nodes: dict[str, float] = {}
        for item in node_overrides:
            name, _, raw = item.partition("=")
            if not _ or not name:
                raise SchemaError(f"bad --set-node {item!r}, expected ID=VALUE")
            nodes[name] = float(raw)
        edges: dict[tuple[str, str], float] = {}
        for item in edge_overrides:
            pair, _, raw = item.partition("=")
            src, sep, dst = pair.partition(":")
            if not _ or not sep or not src or not dst:
                raise SchemaError(
                    f"bad --set-edge {item!r}, expected SRC:DST=WEIGHT"
                )
            edges[(src, dst)] = float(raw)
        report = what_if(doc.graph, Overrides(nodes, edges), config, doc.reference)
    except (FcmError, ValueError) as exc:
        raise _fail_schema(exc)
    if fmt == "machine":
        _emit(canonical_json(report), out)
        return
    precision = config.precision
    lines = [
        "systemic risk: {} -> {} (delta {})".format(
            _fmt(report["systemic_risk"]["before"], precision),
            _fmt(report["systemic_risk"]["after"], precision),
            _fmt(report["systemic_risk"]["delta"], precision),
        )
    ]
    for nid in sorted(report["deltas"]):
        eff = report["deltas"][nid]["effective"]
        if eff["delta"] is None:
            continue
        lines.append(
            f"{nid:<14} {_fmt(eff['before'], precision)} -> "
            f"{_fmt(eff['after'], precision)} (delta {_fmt(eff['delta'], precision)})"
        )
    _emit("\n".join(lines) + "\n", out)


@main.command(name="forecast")
@_hierarchy_opt
@_matrix_opt
@_experts_opt
@_prev_opt
@click.option("--k-max", default=3, show_default=True, help="Largest horizon.")
@click.option("--target", default=None, help="Node to forecast (default: root).")
@_tnorm_opt
@_lambda_opt
@_format_opt
@_out_opt
def forecast_cmd(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    k_max: int,
    target: str | None,
    tnorm: str,
    lam: float,
    fmt: str,
    out: str | None,
) -> None:
    """Risk at every horizon 1..k-max (one edge per time unit)."""
    try:
        config = _config(
            1, tnorm, lam,
            hierarchy_path=hierarchy, expert_paths=tuple(experts), prev_path=prev,
        )
        doc = _assemble(hierarchy, matrix, experts, prev, config)
        node_id = doc.graph.root_id if target is None else target
        points = run_forecast(doc.graph, node_id, k_max, TNorm.parse(tnorm))
    except (FcmError, ValueError) as exc:
        raise _fail_schema(exc)
    if fmt == "machine":
        payload = {
            "target": node_id,
            "tnorm": TNorm.parse(tnorm).value,
            "forecast": [{"horizon": p.horizon, "value": p.value} for p in points],
        }
        _emit(canonical_json(payload), out)
        return
    lines = [f"forecast for {node_id}"] + [
        f"h={p.horizon}  {_fmt(p.value, config.precision)}" for p in points
    ]
    _emit("\n".join(lines) + "\n", out)


@main.command()
@_hierarchy_opt
@_matrix_opt
@_experts_opt
@_prev_opt
@_k_opt
@_tnorm_opt
@_lambda_opt
@_out_opt
@click.option("--extended", is_flag=True, help="Add k-path extended degree columns.")
def analyze(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    k: int,
    tnorm: str,
    lam: float,
    out: str | None,
    extended: bool,
) -> None:
    """Node metrics (degrees, centrality, vulnerability, class) as CSV."""
    try:
        config = _config(
            k, tnorm, lam,
            hierarchy_path=hierarchy, expert_paths=tuple(experts), prev_path=prev,
        )
        doc = _assemble(hierarchy, matrix, experts, prev, config)
        metrics = compute_metrics(doc.graph, k, TNorm.parse(tnorm), extended=extended)
    except FcmError as exc:
        raise _fail_schema(exc)
    _emit(metrics_csv(metrics, extended=extended), out)


@main.command()
@_hierarchy_opt
@_matrix_opt
@_experts_opt
@_prev_opt
@_k_opt
@_tnorm_opt
@_lambda_opt
@click.option("--out", required=True, type=click.Path(), help="Output path.")
def export(
    hierarchy: str,
    matrix: str | None,
    experts: tuple[str, ...],
    prev: str | None,
    k: int,
    tnorm: str,
    lam: float,
    out: str,
) -> None:
    """Write the machine result document (the UI payload)."""
    try:
        config = _config(
            k, tnorm, lam,
            hierarchy_path=hierarchy, expert_paths=tuple(experts), prev_path=prev,
        )
        doc = _assemble(hierarchy, matrix, experts, prev, config)
        result = result_document(doc.graph, config, doc.reference)
    except FcmError as exc:
        raise _fail_schema(exc)
    _emit(canonical_json(result), out)
    click.echo(f"wrote {out}", err=True)


@main.command()
@_hierarchy_opt
@click.option("--store", default="rounds", show_default=True, type=click.Path(),
              help="Directory for round documents.")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", default=None, type=click.Path(),
              help="Static UI build to mount under /ui.")
@_k_opt
@_tnorm_opt
@_lambda_opt
def serve(
    hierarchy: str,
    store: str,
    port: int,
    host: str,
    ui: str | None,
    k: int,
    tnorm: str,
    lam: float,
) -> None:
    """Run the evaluation service for the companion UI."""
    import uvicorn

    from .service import create_app

    try:
        config = _config(k, tnorm, lam, hierarchy_path=hierarchy)
        app = create_app(hierarchy, store, config, ui_dir=ui)
    except FcmError as exc:
        raise _fail_schema(exc)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command(name="matrix")
@_hierarchy_opt
@_out_opt
def matrix_cmd(hierarchy: str, out: str | None) -> None:
    """Export the graph as a CSV adjacency matrix (diagonal = node values)."""
    try:
        doc = read_graph_file(hierarchy)
    except FcmError as exc:
        raise _fail_schema(exc)
    _emit(matrix_to_csv(doc.graph), out)


if __name__ == "__main__":
    main()
