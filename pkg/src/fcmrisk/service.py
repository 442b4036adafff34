"""Evaluation-round service consumed by the companion UI.

Rounds live in an append-only directory: every submission is written as a
new sequence-numbered file (auditable), with last-write-wins per expert.
Freezing a round merges its submissions, smooths against the previous
frozen round, evaluates the hierarchy, and caches the canonical result.
Frozen rounds never change; result bytes equal what the CLI produces for
the same inputs.
"""

from __future__ import annotations

import json
import re
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .elicitation import ExpertEvaluation, feedback_report
from .engine import Overrides, RunConfig, merge_round, result_document, what_if
from .errors import FcmError
from .io import (
    canonical_json,
    expert_to_document,
    graph_to_document,
    merged_to_document,
    parse_expert_document,
    parse_merged_document,
    read_graph_file,
)
from .model import FcmGraph


class ServiceError(Exception):
    """Error with a machine-readable code and an HTTP status."""

    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class RoundStore:
    """Disk-backed rounds; writes serialized, freeze atomic and idempotent."""

    def __init__(self, root: Path, base: FcmGraph, config: RunConfig) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.base = base
        self.config = config
        self._lock = threading.RLock()

    # -- paths ---------------------------------------------------------

    def _round_dir(self, round_id: str) -> Path:
        if not re.fullmatch(r"round-\d{4,}", round_id):
            raise ServiceError(404, "unknown_round", f"no round {round_id!r}")
        return self.root / round_id

    def _meta_path(self, round_id: str) -> Path:
        return self._round_dir(round_id) / "round.json"

    def _read_meta(self, round_id: str) -> dict[str, Any]:
        path = self._meta_path(round_id)
        if not path.exists():
            raise ServiceError(404, "unknown_round", f"no round {round_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def _write_meta(self, round_id: str, meta: dict[str, Any]) -> None:
        self._meta_path(round_id).write_text(
            canonical_json(meta), encoding="utf-8"
        )

    # -- round lifecycle -------------------------------------------------

    def list_rounds(self) -> list[dict[str, Any]]:
        out = []
        for path in sorted(self.root.glob("round-*/round.json")):
            meta = json.loads(path.read_text(encoding="utf-8"))
            meta["experts"] = sorted(self._submissions(meta["round_id"]))
            out.append(meta)
        return out

    def create_round(self, timestamp: str) -> dict[str, Any]:
        with self._lock:
            existing = self.list_rounds()
            open_rounds = [r for r in existing if not r["frozen"]]
            if open_rounds:
                raise ServiceError(
                    409,
                    "round_open",
                    f"round {open_rounds[0]['round_id']!r} is still open; "
                    "freeze it before starting a new one",
                )
            frozen = [r["round_id"] for r in existing if r["frozen"]]
            round_id = f"round-{len(existing) + 1:04d}"
            meta = {
                "round_id": round_id,
                "timestamp": timestamp,
                "frozen": False,
                "previous": frozen[-1] if frozen else None,
            }
            (self._round_dir(round_id) / "submissions").mkdir(parents=True)
            self._write_meta(round_id, meta)
            return meta

    # -- submissions -----------------------------------------------------

    def _submissions(self, round_id: str) -> dict[str, ExpertEvaluation]:
        """Effective submissions: the latest file per expert wins."""
        sub_dir = self._round_dir(round_id) / "submissions"
        latest: dict[str, ExpertEvaluation] = {}
        for path in sorted(sub_dir.glob("*.json")):
            doc = json.loads(path.read_text(encoding="utf-8"))
            evaluation = parse_expert_document(doc)
            latest[evaluation.expert_id] = evaluation
        return latest

    def submit(self, round_id: str, payload: dict[str, Any]) -> dict[str, Any]:
        with self._lock:
            meta = self._read_meta(round_id)
            if meta["frozen"]:
                raise ServiceError(
                    409, "round_frozen", f"round {round_id!r} is frozen"
                )
            try:
                evaluation = parse_expert_document(payload)
            except FcmError as exc:
                raise ServiceError(422, "validation_failed", str(exc)) from exc
            unknown = sorted(
                {
                    nid
                    for pair in evaluation.entries
                    for nid in pair
                    if nid not in self.base
                }
            )
            if unknown:
                raise ServiceError(
                    422,
                    "validation_failed",
                    f"entries reference unknown node(s) {unknown}",
                )
            sub_dir = self._round_dir(round_id) / "submissions"
            seq = len(list(sub_dir.glob("*.json"))) + 1
            replaced = evaluation.expert_id in self._submissions(round_id)
            target = sub_dir / f"{seq:04d}_{evaluation.expert_id}.json"
            target.write_text(
                canonical_json(expert_to_document(evaluation)), encoding="utf-8"
            )
            return {
                "round_id": round_id,
                "expert_id": evaluation.expert_id,
                "entries": len(evaluation.entries),
                "replaced_previous": replaced,
            }

    # -- freeze / results --------------------------------------------------

    def freeze(self, round_id: str, smoothing: float | None) -> bytes:
        with self._lock:
            meta = self._read_meta(round_id)
            result_path = self._round_dir(round_id) / "result.json"
            if meta["frozen"]:
                return result_path.read_bytes()
            submissions = self._submissions(round_id)
            if not submissions:
                raise ServiceError(
                    409, "empty_round", f"round {round_id!r} has no submissions"
                )
            lam = self.config.smoothing if smoothing is None else smoothing
            try:
                config = RunConfig(
                    k=self.config.k,
                    tnorm=self.config.tnorm,
                    smoothing=lam,
                    precision=self.config.precision,
                )
            except FcmError as exc:
                raise ServiceError(422, "validation_failed", str(exc)) from exc
            previous = None
            if meta["previous"] is not None:
                prev_doc = json.loads(
                    (self._round_dir(meta["previous"]) / "merged.json").read_text(
                        encoding="utf-8"
                    )
                )
                previous = parse_merged_document(prev_doc)
            evaluations = [submissions[eid] for eid in sorted(submissions)]
            try:
                graph, merged = merge_round(self.base, evaluations, previous, config)
                doc = result_document(graph, config)
            except FcmError as exc:
                raise ServiceError(422, "validation_failed", str(exc)) from exc
            payload = canonical_json(doc).encode("utf-8")
            tmp = result_path.with_suffix(".json.tmp")
            tmp.write_bytes(payload)
            tmp.replace(result_path)
            (self._round_dir(round_id) / "merged.json").write_text(
                canonical_json(merged_to_document(merged)), encoding="utf-8"
            )
            meta["frozen"] = True
            meta["lambda"] = lam
            self._write_meta(round_id, meta)
            return payload

    def result(self, round_id: str) -> bytes:
        meta = self._read_meta(round_id)
        if not meta["frozen"]:
            raise ServiceError(
                409, "round_not_frozen", f"round {round_id!r} is not frozen yet"
            )
        return (self._round_dir(round_id) / "result.json").read_bytes()

    def feedback(self, round_id: str, expert_id: str) -> dict[str, Any]:
        meta = self._read_meta(round_id)
        if not meta["frozen"]:
            raise ServiceError(
                409, "round_not_frozen",
                f"round {round_id!r} must be frozen before feedback",
            )
        submissions = self._submissions(round_id)
        if expert_id not in submissions:
            raise ServiceError(
                404, "unknown_expert",
                f"expert {expert_id!r} did not submit to {round_id!r}",
            )
        merged_doc = json.loads(
            (self._round_dir(round_id) / "merged.json").read_text(encoding="utf-8")
        )
        merged = parse_merged_document(merged_doc)
        records = feedback_report(submissions[expert_id], merged)
        return {
            "round_id": round_id,
            "expert_id": expert_id,
            "records": [
                {
                    "src": r.src,
                    "dst": r.dst,
                    "expert_weight": r.expert_weight,
                    "merged_weight": r.merged_weight,
                    "divergence": r.divergence,
                    "rank": r.rank,
                }
                for r in records
            ],
        }

    def whatif(self, round_id: str, payload: dict[str, Any]) -> dict[str, Any]:
        meta = self._read_meta(round_id)
        if not meta["frozen"]:
            raise ServiceError(
                409, "round_not_frozen",
                f"freeze round {round_id!r} before running scenarios",
            )
        merged_doc = json.loads(
            (self._round_dir(round_id) / "merged.json").read_text(encoding="utf-8")
        )
        merged = parse_merged_document(merged_doc)
        lam = meta.get("lambda", self.config.smoothing)
        horizon = payload.get("horizon")
        from .engine import apply_merged

        graph = apply_merged(self.base, merged)
        try:
            config = RunConfig(
                k=self.config.k if horizon is None else int(horizon),
                tnorm=self.config.tnorm,
                smoothing=lam,
                precision=self.config.precision,
            )
            overrides = Overrides(
                node_values={
                    str(nid): float(v)
                    for nid, v in (payload.get("nodes") or {}).items()
                },
                edge_weights={
                    (str(e["src"]), str(e["dst"])): float(e["weight"])
                    for e in (payload.get("edges") or [])
                },
            )
            return what_if(graph, overrides, config)
        except (FcmError, KeyError, TypeError, ValueError) as exc:
            raise ServiceError(422, "invalid_override", str(exc)) from exc


# -- request bodies ----------------------------------------------------------


class RoundCreateBody(BaseModel):
    timestamp: str = ""


class EntryBody(BaseModel):
    src: str
    dst: str
    weight: float
    confidence: float = 1.0


class SubmissionBody(BaseModel):
    expert_id: str
    unit_id: str = ""
    entries: list[EntryBody] = Field(default_factory=list)


class FreezeBody(BaseModel):
    smoothing: float | None = Field(default=None, alias="lambda")

    model_config = {"populate_by_name": True}


class EdgeOverrideBody(BaseModel):
    src: str
    dst: str
    weight: float


class WhatIfBody(BaseModel):
    nodes: dict[str, float] = Field(default_factory=dict)
    edges: list[EdgeOverrideBody] = Field(default_factory=list)
    # optional transmission horizon; defaults to the service-wide k
    horizon: int | None = None


def create_app(
    hierarchy_path: str | Path,
    store_dir: str | Path,
    config: RunConfig | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    config = config or RunConfig()
    document = read_graph_file(hierarchy_path)
    store = RoundStore(Path(store_dir), document.graph, config)

    app = FastAPI(title="fcmrisk service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message},
        )

    def canonical_response(payload: Any, status: int = 200) -> Response:
        return Response(
            content=canonical_json(payload),
            media_type="application/json",
            status_code=status,
        )

    @app.get("/hierarchy")
    def get_hierarchy() -> Response:
        doc = graph_to_document(document.graph)
        if document.reference is not None:
            doc["reference"] = document.reference
        doc["config"] = config.echo()
        return canonical_response(doc)

    @app.get("/rounds")
    def get_rounds() -> Response:
        return canonical_response({"rounds": store.list_rounds()})

    @app.post("/rounds", status_code=201)
    def post_round(body: RoundCreateBody) -> Response:
        return canonical_response(store.create_round(body.timestamp), status=201)

    @app.post("/rounds/{round_id}/evaluations")
    def post_evaluation(round_id: str, body: SubmissionBody) -> Response:
        entries = [e.model_dump() for e in body.entries]
        payload = {
            "expert_id": body.expert_id,
            "unit_id": body.unit_id,
            "entries": entries,
        }
        return canonical_response(store.submit(round_id, payload))

    @app.post("/rounds/{round_id}/freeze")
    def post_freeze(round_id: str, body: FreezeBody | None = None) -> Response:
        smoothing = body.smoothing if body is not None else None
        payload = store.freeze(round_id, smoothing)
        return Response(content=payload, media_type="application/json")

    @app.get("/rounds/{round_id}/result")
    def get_result(round_id: str) -> Response:
        return Response(
            content=store.result(round_id), media_type="application/json"
        )

    @app.get("/rounds/{round_id}/feedback/{expert_id}")
    def get_feedback(round_id: str, expert_id: str) -> Response:
        return canonical_response(store.feedback(round_id, expert_id))

    @app.post("/rounds/{round_id}/whatif")
    def post_whatif(round_id: str, body: WhatIfBody) -> Response:
        payload = {
            "nodes": body.nodes,
            "edges": [e.model_dump() for e in body.edges],
            "horizon": body.horizon,
        }
        return canonical_response(store.whatif(round_id, payload))

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
