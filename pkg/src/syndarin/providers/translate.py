"""Translation clients: HTTP, identity/table mocks and a pseudo-translator."""

from __future__ import annotations

from .base import ProviderConfig, RequestRunner
from .cache import DiskCache


class HttpTranslate:
    """Plain JSON translation endpoint (LibreTranslate-style wire format)."""

    def __init__(
        self,
        config: ProviderConfig,
        runner: RequestRunner,
        api_key: str = "",
        cache: DiskCache | None = None,
    ):
        self._config = config
        self._runner = runner
        self._api_key = api_key
        self._cache = cache

    def translate(self, text: str, source: str, target: str) -> str:
        if not text:
            raise ValueError("text must be nonempty")
        payload = {"q": text, "source": source, "target": target}
        if self._api_key:
            payload["api_key"] = self._api_key
        request = {
            "method": "POST",
            "url": self._config.endpoint,
            "json": payload,
        }
        cache_request = {
            "method": "POST",
            "url": self._config.endpoint,
            "json": {"q": text, "source": source, "target": target},
        }

        def compute():
            return self._runner.send("translate", "translate", request)

        if self._cache is not None:
            response = self._cache.get_or_compute(cache_request, compute)
        else:
            response = compute()
        return response["translatedText"]


class IdentityTranslator:
    def __init__(self):
        self.calls = 0

    def translate(self, text: str, source: str, target: str) -> str:
        if not text:
            raise ValueError("text must be nonempty")
        self.calls += 1
        return text


class TableTranslator:
    """Looks translations up in a fixed table; unknown text passes through."""

    def __init__(self, table: dict[str, str]):
        self._table = table
        self.calls = 0

    def translate(self, text: str, source: str, target: str) -> str:
        if not text:
            raise ValueError("text must be nonempty")
        self.calls += 1
        return self._table.get(text, text)


class PseudoTranslator:
    """Deterministic token-by-token transform standing in for real MT.

    A phrase translated on its own mostly stays a contiguous substring of its
    translated source paragraph. Short phrases whose head token has even
    length pick up an extra suffix, emulating the morphological drift real
    translators introduce, so containment-based gates see both clean matches
    and near-misses.
    """

    _SHORT_PHRASE_TOKENS = 4
    _DRIFT_SUFFIX = "ի"  # Armenian "i"

    def __init__(self):
        self.calls = 0

    def translate(self, text: str, source: str, target: str) -> str:
        if not text:
            raise ValueError("text must be nonempty")
        self.calls += 1
        tokens = text.split()
        out = []
        for i, token in enumerate(tokens):
            core = token.lower()[::-1]
            if (
                i == 0
                and len(tokens) <= self._SHORT_PHRASE_TOKENS
                and len(token) % 2 == 0
            ):
                core += self._DRIFT_SUFFIX
            out.append(core)
        return " ".join(out)


class FailingTranslator:
    """Raises for texts in its deny list; used to exercise failure paths."""

    def __init__(self, inner, deny: set[str]):
        self._inner = inner
        self._deny = deny

    def translate(self, text: str, source: str, target: str) -> str:
        from .base import NetworkError

        if text in self._deny:
            raise NetworkError(f"refused to translate: {text[:30]!r}")
        return self._inner.translate(text, source, target)
