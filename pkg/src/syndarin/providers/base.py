"""Provider plumbing: transports, retries, rate limiting and provenance.

Every remote call goes through a Transport so tests can replay recorded
request/response pairs instead of touching the network.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

import httpx

from ..errors import ProviderError
from .provenance import ProvenanceLog
from .ratelimit import RateLimiter


class NetworkError(ProviderError):
    pass


class PageMissingError(ProviderError):
    pass


class NotParallelError(ProviderError):
    pass


class ProviderRefusalError(ProviderError):
    pass


@dataclass
class ProviderConfig:
    endpoint: str = ""
    cache_dir: Path | None = None
    max_concurrent_requests: int = 4
    requests_per_second: float = 8.0
    retry_limit: int = 2

    def __post_init__(self):
        if self.max_concurrent_requests < 1:
            raise ValueError("max_concurrent_requests must be >= 1")
        if self.requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")


def canonical_request(request: dict) -> str:
    """Stable JSON form of a request, used for cache keys and replay lookup."""
    return json.dumps(request, sort_keys=True, ensure_ascii=False)


class HttpTransport:
    """Real HTTPS transport."""

    def __init__(self, timeout: float = 30.0, headers: dict | None = None):
        self._client = httpx.Client(timeout=timeout, headers=headers or {})

    def send(self, request: dict) -> dict:
        method = request.get("method", "GET")
        try:
            resp = self._client.request(
                method,
                request["url"],
                params=request.get("params"),
                json=request.get("json"),
                headers=request.get("headers"),
            )
            resp.raise_for_status()
            return resp.json()
        except httpx.HTTPError as exc:
            raise NetworkError(f"{method} {request['url']}: {exc}") from exc


class RecordedTransport:
    """Replays responses from a committed fixture file.

    The fixture is a JSON list of ``{"request": ..., "response": ...}``
    entries; requests are matched on their canonical form.
    """

    def __init__(self, fixture_path: Path | str):
        entries = json.loads(Path(fixture_path).read_text(encoding="utf-8"))
        self._responses = {
            canonical_request(e["request"]): e["response"] for e in entries
        }
        self.replayed = 0

    def send(self, request: dict) -> dict:
        key = canonical_request(request)
        if key not in self._responses:
            raise NetworkError(f"no recorded response for request: {key}")
        self.replayed += 1
        return self._responses[key]


class RecordingTransport:
    """Wraps a live transport and appends request/response pairs to a file."""

    def __init__(self, inner, out_path: Path | str):
        self._inner = inner
        self._out_path = Path(out_path)
        self._entries: list[dict] = []
        if self._out_path.exists():
            self._entries = json.loads(self._out_path.read_text(encoding="utf-8"))

    def send(self, request: dict) -> dict:
        response = self._inner.send(request)
        self._entries.append({"request": request, "response": response})
        tmp = self._out_path.with_name(self._out_path.name + ".tmp")
        tmp.write_text(
            json.dumps(self._entries, ensure_ascii=False, indent=1), encoding="utf-8"
        )
        tmp.replace(self._out_path)
        return response


class CountingTransport:
    """Test helper: counts calls going through to the wrapped transport."""

    def __init__(self, inner):
        self._inner = inner
        self.calls = 0

    def send(self, request: dict) -> dict:
        self.calls += 1
        return self._inner.send(request)


class RequestRunner:
    """Applies concurrency bounds, rate limiting, retries and provenance
    logging to every transport round trip."""

    def __init__(
        self,
        transport,
        config: ProviderConfig,
        provenance: ProvenanceLog | None = None,
        clock=None,
        sleep=None,
    ):
        self._transport = transport
        self._config = config
        self._provenance = provenance
        self._limiter = RateLimiter(
            config.requests_per_second, clock=clock, sleep=sleep
        )
        self._semaphore = threading.BoundedSemaphore(config.max_concurrent_requests)
        self._sleep = sleep if sleep is not None else _default_sleep

    def send(self, provider: str, operation: str, request: dict) -> dict:
        last_error = None
        for attempt in range(self._config.retry_limit + 1):
            with self._semaphore:
                self._limiter.acquire()
                try:
                    response = self._transport.send(request)
                except NetworkError as exc:
                    last_error = exc
                    if self._provenance:
                        self._provenance.log(
                            provider, operation, request, error=str(exc)
                        )
                    self._sleep(min(2.0, 0.1 * (2**attempt)))
                    continue
            if self._provenance:
                self._provenance.log(provider, operation, request, response=response)
            return response
        raise NetworkError(
            f"{provider}.{operation} failed after "
            f"{self._config.retry_limit + 1} attempts: {last_error}"
        )


def _default_sleep(seconds: float) -> None:
    import time

    time.sleep(seconds)
