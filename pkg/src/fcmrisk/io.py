"""Document schemas and serialization.

Graph documents are JSON with top-level "nodes" and "edges"; expert files
are JSON (or CSV with columns src,dst,weight,confidence). A CSV matrix
variant carries node ids in the header row and first column, node values on
the diagonal, and absent entries as empty cells. Machine outputs are always
serialized canonically so identical inputs produce identical bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .elicitation import EntrySupport, ExpertEvaluation, MergedMatrix
from .errors import SchemaError
from .model import Edge, FcmGraph, RiskNode

REFERENCE_ROWS = ("vulnerability", "out_degree", "in_degree", "centrality")


@dataclass(frozen=True)
class GraphDocument:
    """A parsed graph file: the map itself plus optional reference rows
    (externally published values to print beside computed ones)."""

    graph: FcmGraph
    reference: dict[str, dict[str, float]] | None = None


def canonical_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(mapping: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in mapping:
        raise SchemaError(f"{where}: missing required key {key!r}")
    return mapping[key]


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_graph_document(doc: Mapping[str, Any]) -> GraphDocument:
    if not isinstance(doc, Mapping):
        raise SchemaError("graph document must be a JSON object")
    nodes_raw = _require(doc, "nodes", "graph document")
    if not isinstance(nodes_raw, Sequence) or isinstance(nodes_raw, (str, bytes)):
        raise SchemaError("graph document: 'nodes' must be a list")
    nodes: list[RiskNode] = []
    for i, item in enumerate(nodes_raw):
        where = f"nodes[{i}]"
        if not isinstance(item, Mapping):
            raise SchemaError(f"{where}: expected an object")
        value = item.get("value")
        nodes.append(
            RiskNode(
                id=str(_require(item, "id", where)),
                label=str(item.get("label", item["id"])),
                level=int(_number(_require(item, "level", where), where + ".level")),
                parent=None if item.get("parent") is None else str(item["parent"]),
                value=None if value is None else _number(value, where + ".value"),
            )
        )
    edges_raw = doc.get("edges", [])
    if not isinstance(edges_raw, Sequence) or isinstance(edges_raw, (str, bytes)):
        raise SchemaError("graph document: 'edges' must be a list")
    edges: list[Edge] = []
    for i, item in enumerate(edges_raw):
        where = f"edges[{i}]"
        if not isinstance(item, Mapping):
            raise SchemaError(f"{where}: expected an object")
        edges.append(
            Edge(
                src=str(_require(item, "src", where)),
                dst=str(_require(item, "dst", where)),
                weight=_number(_require(item, "weight", where), where + ".weight"),
            )
        )
    graph = FcmGraph(nodes, edges, timestamp=str(doc.get("timestamp", "")))

    reference = None
    if "reference" in doc and doc["reference"] is not None:
        raw_ref = doc["reference"]
        if not isinstance(raw_ref, Mapping):
            raise SchemaError("graph document: 'reference' must be an object")
        reference = {}
        for row, cells in raw_ref.items():
            if row not in REFERENCE_ROWS:
                raise SchemaError(
                    f"reference row {row!r} not one of {list(REFERENCE_ROWS)}"
                )
            if not isinstance(cells, Mapping):
                raise SchemaError(f"reference.{row}: expected an object")
            reference[row] = {
                str(nid): _number(v, f"reference.{row}.{nid}")
                for nid, v in cells.items()
            }
    return GraphDocument(graph=graph, reference=reference)


def graph_to_document(graph: FcmGraph) -> dict[str, Any]:
    return {
        "timestamp": graph.timestamp,
        "nodes": [
            {
                "id": n.id,
                "label": n.label,
                "level": n.level,
                "parent": n.parent,
                "value": n.value,
            }
            for n in graph.nodes()
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": e.weight} for e in graph.edges()
        ],
    }


def read_graph_file(path: str | Path) -> GraphDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return parse_graph_document(doc)


# -- CSV matrix ------------------------------------------------------------


def parse_matrix_csv(text: str) -> tuple[list[str], list[list[float | None]]]:
    """Square matrix with node ids across the header and down column one.

    Diagonal cells are node values, empty cells absent entries.
    """
    rows = [row for row in csv.reader(_io.StringIO(text)) if row]
    if not rows:
        raise SchemaError("matrix CSV is empty")
    header = [cell.strip() for cell in rows[0][1:]]
    if not header:
        raise SchemaError("matrix CSV: header row carries no node ids")
    if len(rows) - 1 != len(header):
        raise SchemaError(
            f"matrix CSV: {len(header)} columns but {len(rows) - 1} data rows"
        )
    matrix: list[list[float | None]] = []
    row_ids: list[str] = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header) + 1:
            raise SchemaError(f"matrix CSV line {r}: expected {len(header) + 1} cells")
        row_ids.append(row[0].strip())
        parsed: list[float | None] = []
        for c, cell in enumerate(row[1:]):
            cell = cell.strip()
            if cell == "":
                parsed.append(None)
                continue
            try:
                parsed.append(float(cell))
            except ValueError:
                raise SchemaError(
                    f"matrix CSV line {r}, column {header[c]!r}: bad number {cell!r}"
                ) from None
        matrix.append(parsed)
    if row_ids != header:
        raise SchemaError(
            "matrix CSV: row ids must match header ids in the same order"
        )
    return header, matrix


def matrix_to_csv(graph: FcmGraph) -> str:
    ids, matrix = graph.to_matrix()
    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + list(ids))
    for nid, row in zip(ids, matrix):
        writer.writerow(
            [nid] + ["" if cell is None else repr(cell) for cell in row]
        )
    return buffer.getvalue()


# -- expert files ----------------------------------------------------------


def parse_expert_document(doc: Mapping[str, Any]) -> ExpertEvaluation:
    if not isinstance(doc, Mapping):
        raise SchemaError("expert document must be a JSON object")
    expert_id = str(_require(doc, "expert_id", "expert document"))
    unit_id = str(doc.get("unit_id", ""))
    entries_raw = _require(doc, "entries", "expert document")
    if not isinstance(entries_raw, Sequence) or isinstance(entries_raw, (str, bytes)):
        raise SchemaError("expert document: 'entries' must be a list")
    entries: dict[tuple[str, str], tuple[float, float]] = {}
    for i, item in enumerate(entries_raw):
        where = f"entries[{i}]"
        if not isinstance(item, Mapping):
            raise SchemaError(f"{where}: expected an object")
        src = str(_require(item, "src", where))
        dst = str(_require(item, "dst", where))
        weight = _number(_require(item, "weight", where), where + ".weight")
        confidence = _number(item.get("confidence", 1.0), where + ".confidence")
        if (src, dst) in entries:
            raise SchemaError(f"{where}: duplicate entry {src!r}->{dst!r}")
        entries[(src, dst)] = (weight, confidence)
    return ExpertEvaluation(expert_id=expert_id, unit_id=unit_id, entries=entries)


def parse_expert_csv(text: str, expert_id: str, unit_id: str = "") -> ExpertEvaluation:
    reader = csv.DictReader(_io.StringIO(text))
    required = {"src", "dst", "weight"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise SchemaError(
            "expert CSV needs a header with columns src,dst,weight[,confidence]"
        )
    entries: dict[tuple[str, str], tuple[float, float]] = {}
    for i, row in enumerate(reader, start=2):
        where = f"expert CSV line {i}"
        try:
            weight = float(row["weight"])
        except (TypeError, ValueError):
            raise SchemaError(f"{where}: bad weight {row.get('weight')!r}") from None
        raw_conf = (row.get("confidence") or "").strip()
        try:
            confidence = float(raw_conf) if raw_conf else 1.0
        except ValueError:
            raise SchemaError(f"{where}: bad confidence {raw_conf!r}") from None
        key = (row["src"].strip(), row["dst"].strip())
        if key in entries:
            raise SchemaError(f"{where}: duplicate entry {key[0]!r}->{key[1]!r}")
        entries[key] = (weight, confidence)
    return ExpertEvaluation(expert_id=expert_id, unit_id=unit_id, entries=entries)


def read_expert_file(path: str | Path) -> ExpertEvaluation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return parse_expert_csv(text, expert_id=path.stem)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return parse_expert_document(doc)


def expert_to_document(evaluation: ExpertEvaluation) -> dict[str, Any]:
    return {
        "expert_id": evaluation.expert_id,
        "unit_id": evaluation.unit_id,
        "entries": [
            {
                "src": src,
                "dst": dst,
                "weight": evaluation.entries[(src, dst)][0],
                "confidence": evaluation.entries[(src, dst)][1],
            }
            for src, dst in sorted(evaluation.entries)
        ],
    }


# -- merged matrices -------------------------------------------------------


def merged_to_document(merged: MergedMatrix) -> dict[str, Any]:
    return {
        "universe": None if merged.universe is None else sorted(merged.universe),
        "entries": [
            {
                "src": src,
                "dst": dst,
                "weight": merged.entries[(src, dst)],
                "total_confidence": merged.support[(src, dst)].total_confidence,
                "contributors": merged.support[(src, dst)].contributors,
                "stale": merged.support[(src, dst)].stale,
            }
            for src, dst in merged.pairs()
        ],
    }


def parse_merged_document(doc: Mapping[str, Any]) -> MergedMatrix:
    if not isinstance(doc, Mapping):
        raise SchemaError("merged matrix document must be a JSON object")
    entries_raw = _require(doc, "entries", "merged matrix")
    entries: dict[tuple[str, str], float] = {}
    support: dict[tuple[str, str], EntrySupport] = {}
    for i, item in enumerate(entries_raw):
        where = f"entries[{i}]"
        src = str(_require(item, "src", where))
        dst = str(_require(item, "dst", where))
        entries[(src, dst)] = _number(
            _require(item, "weight", where), where + ".weight"
        )
        support[(src, dst)] = EntrySupport(
            total_confidence=_number(item.get("total_confidence", 0.0), where),
            contributors=int(item.get("contributors", 0)),
            stale=bool(item.get("stale", False)),
        )
    universe = doc.get("universe")
    return MergedMatrix(
        entries=entries,
        support=support,
        universe=None if universe is None else frozenset(str(u) for u in universe),
    )


def read_merged_file(path: str | Path) -> MergedMatrix:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return parse_merged_document(doc)
