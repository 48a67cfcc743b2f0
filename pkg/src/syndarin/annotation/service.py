"""HTTP JSON API for annotator sessions.

Endpoints (the contract the browser UI consumes):

* ``GET /batches/{batch_id}/next?annotator=<id>`` -- next blinded task plus
  progress; ``task`` is null once the annotator finished the batch.
* ``POST /annotations`` -- store one verdict; invalid reason/verdict
  combinations are rejected before anything is written.
* ``GET /batches/{batch_id}/report`` -- agreement report; 409 until every
  task has two annotators.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from ..errors import DataError
from .models import (
    AnnotationRecord,
    InsufficientAnnotatorsError,
    InvalidReasonsError,
    UnknownTaskError,
)
from .store import AnnotationStore


class AnnotationIn(BaseModel):
    task_id: str
    annotator_id: str = Field(min_length=1)
    verdict: int | str
    reasons: list[str] = []


def create_app(data_dir: Path | str) -> FastAPI:
    store = AnnotationStore(data_dir)
    app = FastAPI(title="annotation-service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/batches/{batch_id}/next")
    def next_task(batch_id: str, annotator: str = Query(min_length=1)):
        try:
            task = store.next_task(batch_id, annotator)
            done, total = store.progress(batch_id, annotator)
        except UnknownTaskError:
            raise HTTPException(status_code=404, detail="unknown_batch")
        return {
            "batch_id": batch_id,
            "task": task.annotator_payload() if task else None,
            "progress": {"done": done, "total": total},
        }

    @app.post("/annotations", status_code=201)
    def submit_annotation(body: AnnotationIn):
        try:
            record = AnnotationRecord(
                task_id=body.task_id,
                annotator_id=body.annotator_id,
                verdict=body.verdict,
                reasons=tuple(body.reasons),
            )
        except InvalidReasonsError as exc:
            raise HTTPException(status_code=400, detail=f"invalid_reasons: {exc}")
        except DataError as exc:
            raise HTTPException(status_code=400, detail=f"invalid_verdict: {exc}")
        try:
            stored = store.record_annotation(record)
        except UnknownTaskError:
            raise HTTPException(status_code=404, detail="unknown_task")
        return {"stored": stored.to_record()}

    @app.get("/batches/{batch_id}/report")
    def batch_report(batch_id: str):
        try:
            report = store.report(batch_id)
        except UnknownTaskError:
            raise HTTPException(status_code=404, detail="unknown_batch")
        except InsufficientAnnotatorsError as exc:
            raise HTTPException(status_code=409, detail=f"incomplete: {exc}")
        return report.to_dict()

    return app


def serve(data_dir: Path | str, host: str = "127.0.0.1", port: int = 8712) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port, log_level="warning")
