"""Sliding-window rate limiter with an injectable clock for testing."""

from __future__ import annotations

import threading
import time
from collections import deque

WINDOW_SECONDS = 1.0


class RateLimiter:
    """Blocks callers so at most floor(rate) requests start in any 1 s window.

    For fractional rates below 1/s a minimum spacing of 1/rate seconds
    between consecutive requests is enforced instead, which is the stricter
    reading.
    """

    def __init__(self, requests_per_second: float, clock=None, sleep=None):
        if requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")
        self._capacity = max(1, int(requests_per_second))
        self._min_spacing = (
            WINDOW_SECONDS / requests_per_second if requests_per_second < 1 else 0.0
        )
        self._clock = clock if clock is not None else time.monotonic
        self._sleep = sleep if sleep is not None else time.sleep
        self._recent: deque[float] = deque()
        self._last: float | None = None
        self._lock = threading.Lock()

    def acquire(self) -> None:
        with self._lock:
            while True:
                now = self._clock()
                while self._recent and self._recent[0] <= now - WINDOW_SECONDS:
                    self._recent.popleft()
                if self._min_spacing and self._last is not None:
                    wait = self._last + self._min_spacing - now
                    if wait > 0:
                        self._sleep(wait)
                        continue
                if len(self._recent) >= self._capacity:
                    wait = self._recent[0] + WINDOW_SECONDS - now
                    self._sleep(max(wait, 1e-4))
                    continue
                self._recent.append(now)
                self._last = now
                return
