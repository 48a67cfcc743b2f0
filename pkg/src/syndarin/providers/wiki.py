"""Wiki clients: intro-paragraph pairs, page statistics and category listing.

``HttpWiki`` speaks the MediaWiki action API plus the REST pageviews metrics
endpoint. ``MockWiki`` serves an in-memory article table for offline runs.
"""

from __future__ import annotations

import datetime as dt
import urllib.parse
from dataclasses import dataclass

from ..records import PageStats
from .base import (
    NetworkError,
    NotParallelError,
    PageMissingError,
    ProviderConfig,
    RequestRunner,
)
from .cache import DiskCache

DEFAULT_API_TEMPLATE = "https://{lang}.wikipedia.org/w/api.php"
DEFAULT_METRICS_URL = "https://wikimedia.org/api/rest_v1/metrics/pageviews/per-article"


@dataclass(frozen=True)
class RawIntroPair:
    """Intro texts of one article in both languages, before gating."""

    source_title: str
    target_title: str
    source_text: str
    target_text: str


def first_paragraph(extract: str) -> str:
    """First nonempty paragraph of a plain-text lead section."""
    for block in extract.split("\n\n"):
        block = block.strip()
        if block:
            return block
    return ""


class HttpWiki:
    def __init__(
        self,
        config: ProviderConfig,
        runner: RequestRunner,
        api_template: str = DEFAULT_API_TEMPLATE,
        metrics_url: str = DEFAULT_METRICS_URL,
        window_days: int = 365,
        as_of: dt.date | None = None,
        cache: DiskCache | None = None,
    ):
        self._config = config
        self._runner = runner
        self._api_template = api_template
        self._metrics_url = metrics_url.rstrip("/")
        self._window_days = window_days
        self._as_of = as_of if as_of is not None else dt.date.today()
        self._cache = cache

    def _send(self, operation: str, request: dict) -> dict:
        if self._cache is not None:
            return self._cache.get_or_compute(
                request, lambda: self._runner.send("wiki", operation, request)
            )
        return self._runner.send("wiki", operation, request)

    def _api_url(self, lang: str) -> str:
        return self._api_template.format(lang=lang)

    def _query(self, operation: str, lang: str, params: dict) -> dict:
        base = {"action": "query", "format": "json", "formatversion": 2}
        request = {
            "method": "GET",
            "url": self._api_url(lang),
            "params": {**base, **params},
        }
        return self._send(operation, request)

    @staticmethod
    def _single_page(response: dict, title: str) -> dict:
        pages = response.get("query", {}).get("pages", [])
        if not pages:
            raise PageMissingError(f"page not found: {title}")
        page = pages[0]
        if page.get("missing") or page.get("invalid"):
            raise PageMissingError(f"page not found: {title}")
        return page

    def fetch_intro_pair(
        self, title: str, source_lang: str, target_lang: str
    ) -> RawIntroPair:
        response = self._query(
            "fetch_intro_pair",
            source_lang,
            {
                "prop": "extracts|langlinks",
                "explaintext": 1,
                "exintro": 1,
                "redirects": 1,
                "lllang": target_lang,
                "lllimit": "max",
                "titles": title,
            },
        )
        page = self._single_page(response, title)
        links = [
            l for l in page.get("langlinks", []) if l.get("lang") == target_lang
        ]
        if not links:
            raise NotParallelError(
                f"{title!r} has no {target_lang} counterpart"
            )
        target_title = links[0]["title"]
        target_resp = self._query(
            "fetch_intro_pair",
            target_lang,
            {
                "prop": "extracts",
                "explaintext": 1,
                "exintro": 1,
                "redirects": 1,
                "titles": target_title,
            },
        )
        target_page = self._single_page(target_resp, target_title)
        source_text = first_paragraph(page.get("extract", ""))
        target_text = first_paragraph(target_page.get("extract", ""))
        if not source_text or not target_text:
            raise NotParallelError(f"{title!r} has an empty intro on one side")
        return RawIntroPair(
            source_title=page.get("title", title),
            target_title=target_title,
            source_text=source_text,
            target_text=target_text,
        )

    def fetch_stats(self, title: str, lang: str) -> PageStats:
        return PageStats(
            title=title,
            language=lang,
            view_count=self._view_count(title, lang),
            edit_count=self._edit_count(title, lang),
        )

    def _view_count(self, title: str, lang: str) -> int:
        end = self._as_of
        start = end - dt.timedelta(days=self._window_days)
        quoted = urllib.parse.quote(title.replace(" ", "_"), safe="")
        url = (
            f"{self._metrics_url}/{lang}.wikipedia/all-access/user/"
            f"{quoted}/monthly/{start.strftime('%Y%m%d')}/{end.strftime('%Y%m%d')}"
        )
        try:
            response = self._send("fetch_views", {"method": "GET", "url": url})
        except NetworkError:
            # The metrics endpoint 404s for pages with no views in the window.
            return 0
        return sum(item.get("views", 0) for item in response.get("items", []))

    def _edit_count(self, title: str, lang: str) -> int:
        count = 0
        cont: dict = {}
        while True:
            response = self._query(
                "fetch_edits",
                lang,
                {
                    "prop": "revisions",
                    "rvprop": "ids",
                    "rvlimit": "max",
                    "titles": title,
                    **cont,
                },
            )
            page = self._single_page(response, title)
            count += len(page.get("revisions", []))
            cont = response.get("continue")
            if not cont:
                return count

    def list_category(self, category: str, lang: str, limit: int) -> list[str]:
        titles: list[str] = []
        cont: dict = {}
        while len(titles) < limit:
            response = self._query(
                "list_category",
                lang,
                {
                    "list": "categorymembers",
                    "cmtitle": f"Category:{category}",
                    "cmnamespace": 0,
                    "cmlimit": min(500, limit - len(titles)),
                    **cont,
                },
            )
            members = response.get("query", {}).get("categorymembers", [])
            titles.extend(m["title"] for m in members)
            cont = response.get("continue")
            if not cont:
                break
        return titles[:limit]


@dataclass
class MockArticle:
    title: str
    source_text: str
    target_text: str | None = None  # None means no target-language counterpart
    views: int = 5000
    edits: int = 25
    target_views: int | None = None
    target_edits: int | None = None


class MockWiki:
    """Deterministic in-memory wiki for tests and offline pipeline runs."""

    def __init__(self, articles: dict[str, MockArticle]):
        self._articles = articles
        self.calls = 0

    @classmethod
    def from_records(cls, records: list[dict]) -> "MockWiki":
        articles = {}
        for rec in records:
            articles[rec["title"]] = MockArticle(
                title=rec["title"],
                source_text=rec["source_text"],
                target_text=rec.get("target_text"),
                views=rec.get("views", 5000),
                edits=rec.get("edits", 25),
                target_views=rec.get("target_views"),
                target_edits=rec.get("target_edits"),
            )
        return cls(articles)

    def _lookup(self, title: str) -> MockArticle:
        if title not in self._articles:
            raise PageMissingError(f"page not found: {title}")
        return self._articles[title]

    def fetch_intro_pair(self, title, source_lang, target_lang) -> RawIntroPair:
        self.calls += 1
        article = self._lookup(title)
        if article.target_text is None:
            raise NotParallelError(f"{title!r} has no {target_lang} counterpart")
        return RawIntroPair(
            source_title=article.title,
            target_title=f"{target_lang}:{article.title}",
            source_text=article.source_text,
            target_text=article.target_text,
        )

    def fetch_stats(self, title, lang) -> PageStats:
        self.calls += 1
        article = self._lookup(title.split(":", 1)[-1] if ":" in title else title)
        if ":" in title and article.target_views is not None:
            views, edits = article.target_views, article.target_edits or article.edits
        else:
            views, edits = article.views, article.edits
        return PageStats(title=title, language=lang, view_count=views, edit_count=edits)

    def list_category(self, category, lang, limit) -> list[str]:
        return sorted(self._articles)[:limit]
