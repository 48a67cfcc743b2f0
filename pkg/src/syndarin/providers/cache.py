"""Content-addressed disk cache for provider responses.

Keys are the SHA-256 of the canonical request; writes are atomic
(temp file then rename) so concurrent writers cannot corrupt entries.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path

from .base import canonical_request


class DiskCache:
    def __init__(self, root: Path | str):
        self._root = Path(root)
        self._root.mkdir(parents=True, exist_ok=True)
        self._key_locks: dict[str, threading.Lock] = {}
        self._table_lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path_for(self, key: str) -> Path:
        return self._root / key[:2] / f"{key}.json"

    @staticmethod
    def key_of(request: dict) -> str:
        return hashlib.sha256(canonical_request(request).encode("utf-8")).hexdigest()

    def get(self, request: dict):
        path = self._path_for(self.key_of(request))
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def put(self, request: dict, value) -> None:
        path = self._path_for(self.key_of(request))
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(value, fh, ensure_ascii=False)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, request: dict, compute):
        """Return the cached value, computing it at most once per key."""
        key = self.key_of(request)
        with self._table_lock:
            lock = self._key_locks.setdefault(key, threading.Lock())
        with lock:
            cached = self.get(request)
            if cached is not None:
                self.hits += 1
                return cached
            self.misses += 1
            value = compute()
            self.put(request, value)
            return value
