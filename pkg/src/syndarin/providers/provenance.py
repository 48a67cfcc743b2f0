"""Append-only JSONL log of every provider request/response envelope."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path


class ProvenanceLog:
    def __init__(self, path: Path | str, clock=None):
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seq = 0
        self._clock = clock if clock is not None else time.time

    def log(self, provider: str, operation: str, request: dict, response=None, error=None):
        envelope = {
            "ts": round(self._clock(), 3),
            "provider": provider,
            "operation": operation,
            "request": request,
        }
        if error is not None:
            envelope["error"] = error
        else:
            envelope["response"] = response
        with self._lock:
            envelope["seq"] = self._seq
            self._seq += 1
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(envelope, ensure_ascii=False))
                fh.write("\n")
