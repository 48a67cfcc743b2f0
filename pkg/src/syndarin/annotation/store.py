"""Append-only annotation storage.

Layout under the data directory::

    batches/<batch_id>/tasks.jsonl        one AnnotationTask per line
    batches/<batch_id>/annotations.jsonl  append-only AnnotationRecord log

A re-submission for the same (task_id, annotator_id) appends a superseding
line; the latest line wins. History is never rewritten.
"""

from __future__ import annotations

import datetime as dt
import json
import threading
from pathlib import Path

from .agreement import AgreementReport, compute_agreement_report
from .models import AnnotationRecord, AnnotationTask, UnknownTaskError


class AnnotationStore:
    def __init__(self, root: Path | str, clock=None):
        self._root = Path(root)
        self._root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._clock = clock if clock is not None else (
            lambda: dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
        )

    def _batch_dir(self, batch_id: str) -> Path:
        return self._root / "batches" / batch_id

    def list_batches(self) -> list[str]:
        base = self._root / "batches"
        if not base.exists():
            return []
        return sorted(p.name for p in base.iterdir() if p.is_dir())

    def save_batch(self, tasks: list[AnnotationTask]) -> None:
        if not tasks:
            raise ValueError("batch must contain at least one task")
        batch_id = tasks[0].batch_id
        batch_dir = self._batch_dir(batch_id)
        batch_dir.mkdir(parents=True, exist_ok=True)
        tmp = batch_dir / "tasks.jsonl.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            for task in tasks:
                fh.write(json.dumps(task.to_record(), ensure_ascii=False))
                fh.write("\n")
        tmp.replace(batch_dir / "tasks.jsonl")

    def load_batch(self, batch_id: str) -> list[AnnotationTask]:
        path = self._batch_dir(batch_id) / "tasks.jsonl"
        if not path.exists():
            raise UnknownTaskError(f"unknown batch: {batch_id}")
        tasks = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    tasks.append(AnnotationTask.from_record(json.loads(line)))
        return tasks

    def _annotations_path(self, batch_id: str) -> Path:
        return self._batch_dir(batch_id) / "annotations.jsonl"

    def _batch_of_task(self, task_id: str) -> str:
        for batch_id in self.list_batches():
            if any(t.task_id == task_id for t in self.load_batch(batch_id)):
                return batch_id
        raise UnknownTaskError(f"unknown task: {task_id}")

    def record_annotation(self, record: AnnotationRecord) -> AnnotationRecord:
        """Validate, stamp and append; duplicates supersede the older line."""
        with self._lock:
            batch_id = self._batch_of_task(record.task_id)
            existing = self.latest_records(batch_id)
            supersedes = (record.task_id, record.annotator_id) in existing
            stamped = AnnotationRecord(
                task_id=record.task_id,
                annotator_id=record.annotator_id,
                verdict=record.verdict,
                reasons=record.reasons,
                timestamp=record.timestamp or self._clock(),
            )
            envelope = {"record": stamped.to_record(), "supersedes": supersedes}
            with open(self._annotations_path(batch_id), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(envelope, ensure_ascii=False))
                fh.write("\n")
            return stamped

    def latest_records(self, batch_id: str) -> dict:
        """Latest record per (task_id, annotator_id)."""
        path = self._annotations_path(batch_id)
        latest: dict = {}
        if not path.exists():
            return latest
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = AnnotationRecord.from_record(json.loads(line)["record"])
                latest[(rec.task_id, rec.annotator_id)] = rec
        return latest

    def next_task(self, batch_id: str, annotator_id: str) -> AnnotationTask | None:
        tasks = self.load_batch(batch_id)
        done = {
            task_id
            for (task_id, annotator) in self.latest_records(batch_id)
            if annotator == annotator_id
        }
        for task in tasks:
            if task.task_id not in done:
                return task
        return None

    def progress(self, batch_id: str, annotator_id: str) -> tuple[int, int]:
        tasks = self.load_batch(batch_id)
        done = {
            task_id
            for (task_id, annotator) in self.latest_records(batch_id)
            if annotator == annotator_id
        }
        return len(done & {t.task_id for t in tasks}), len(tasks)

    def report(self, batch_id: str) -> AgreementReport:
        tasks = self.load_batch(batch_id)
        records = list(self.latest_records(batch_id).values())
        return compute_agreement_report(tasks, records)
