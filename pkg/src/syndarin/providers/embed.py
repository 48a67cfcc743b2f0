"""Embedding clients: HTTP endpoint plus deterministic offline embedders."""

from __future__ import annotations

import hashlib
import math

from ..records import EmbeddingVector
from .base import ProviderConfig, RequestRunner
from .cache import DiskCache


class HttpEmbed:
    """Embeddings endpoint client (OpenAI-compatible wire format)."""

    def __init__(
        self,
        config: ProviderConfig,
        runner: RequestRunner,
        model_id: str = "default-embed",
        api_key: str = "",
        cache: DiskCache | None = None,
    ):
        self._config = config
        self._runner = runner
        self._model_id = model_id
        self._api_key = api_key
        self._cache = cache

    def embed(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValueError("text must be nonempty")
        request = {
            "method": "POST",
            "url": f"{self._config.endpoint.rstrip('/')}/embeddings",
            "json": {"model": self._model_id, "input": text},
        }
        if self._api_key:
            request["headers"] = {"Authorization": f"Bearer {self._api_key}"}

        def compute():
            return self._runner.send("embed", "embed", request)

        if self._cache is not None:
            cache_request = {k: v for k, v in request.items() if k != "headers"}
            response = self._cache.get_or_compute(cache_request, compute)
        else:
            response = compute()
        values = tuple(float(v) for v in response["data"][0]["embedding"])
        return EmbeddingVector(values=values, model_id=self._model_id)


class HashingEmbedder:
    """Bag-of-tokens embedding over stable token hashes.

    Deterministic per (text, dim); texts sharing tokens get positively
    correlated vectors, which is enough signal for offline similarity gating.
    """

    def __init__(self, dim: int = 64):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self._dim = dim
        self.model_id = f"hashing-{dim}"
        self.calls = 0

    def embed(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValueError("text must be nonempty")
        self.calls += 1
        counts = [0.0] * self._dim
        for token in text.casefold().split():
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            idx = int.from_bytes(digest[:4], "big") % self._dim
            counts[idx] += 1.0
        norm = math.sqrt(sum(c * c for c in counts))
        if norm == 0.0:
            counts[0] = 1.0
            norm = 1.0
        return EmbeddingVector(
            values=tuple(c / norm for c in counts), model_id=self.model_id
        )


class TableEmbedder:
    """Returns fixed vectors per text; for constructing exact-similarity cases."""

    def __init__(self, table: dict[str, tuple[float, ...]], model_id: str = "table"):
        self._table = table
        self.model_id = model_id
        self.calls = 0

    def embed(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValueError("text must be nonempty")
        self.calls += 1
        return EmbeddingVector(values=tuple(self._table[text]), model_id=self.model_id)
