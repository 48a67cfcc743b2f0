"""Parallel paragraph mining: fetch intro pairs and gate them.

A pair survives when both pages are popular enough (strictly more views and
edits than the configured floors) and the two paragraphs have similar token
counts. Rejections carry the first failing reason.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ProviderError
from .records import PageStats, ParallelParagraphPair

REASON_LOW_VIEWS = "low_views"
REASON_LOW_EDITS = "low_edits"
REASON_LENGTH_MISMATCH = "length_mismatch"
REASON_NOT_PARALLEL = "not_parallel"
REASON_PAGE_MISSING = "page_missing"
REASON_PROVIDER_FAILED = "provider_failed"

STATS_POLICIES = ("source", "target", "both")


@dataclass
class MiningConfig:
    k_dm: int = 40
    min_views: int = 1000
    min_edits: int = 5
    stats_page_policy: str = "both"
    # Alternative length gate: reject when |a-b| / max(a, b) exceeds the
    # ratio. Off by default; the absolute-difference gate is the primary one.
    use_length_ratio: bool = False
    max_length_ratio: float = 0.35

    def __post_init__(self):
        if self.k_dm < 0:
            raise ValueError("k_dm must be nonnegative")
        if self.stats_page_policy not in STATS_POLICIES:
            raise ValueError(f"stats_page_policy must be one of {STATS_POLICIES}")


@dataclass(frozen=True)
class GateVerdict:
    accepted: bool
    reason: str | None = None

    @classmethod
    def accept(cls) -> "GateVerdict":
        return cls(True, None)

    @classmethod
    def reject(cls, reason: str) -> "GateVerdict":
        return cls(False, reason)


@dataclass
class MiningReport:
    accepted: int = 0
    rejected: Counter = field(default_factory=Counter)
    errors: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.accepted + sum(self.rejected.values())

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": dict(sorted(self.rejected.items())),
            "errors": self.errors,
        }


def tokenize(text: str) -> list[str]:
    """Unicode-whitespace split; punctuation stays attached to its token."""
    return text.split()


def pair_id_for(title: str, source_lang: str, target_lang: str) -> str:
    digest = hashlib.sha256(title.encode("utf-8")).hexdigest()[:12]
    return f"{source_lang}-{target_lang}-{digest}"


def _gated_stats(pair: ParallelParagraphPair, policy: str) -> list[PageStats]:
    if policy == "source":
        return [pair.source_stats]
    if policy == "target":
        return [pair.target_stats]
    return [pair.source_stats, pair.target_stats]


def accept_pair(pair: ParallelParagraphPair, cfg: MiningConfig) -> GateVerdict:
    pages = _gated_stats(pair, cfg.stats_page_policy)
    for stats in pages:
        if not stats.view_count > cfg.min_views:
            return GateVerdict.reject(REASON_LOW_VIEWS)
    for stats in pages:
        if not stats.edit_count > cfg.min_edits:
            return GateVerdict.reject(REASON_LOW_EDITS)
    a, b = pair.source_token_count, pair.target_token_count
    if cfg.use_length_ratio:
        ratio = abs(a - b) / max(a, b, 1)
        if ratio > cfg.max_length_ratio:
            return GateVerdict.reject(REASON_LENGTH_MISMATCH)
    elif abs(a - b) > cfg.k_dm:
        return GateVerdict.reject(REASON_LENGTH_MISMATCH)
    return GateVerdict.accept()


def build_pair(title, source_lang, target_lang, wiki) -> ParallelParagraphPair:
    raw = wiki.fetch_intro_pair(title, source_lang, target_lang)
    source_stats = wiki.fetch_stats(raw.source_title, source_lang)
    target_stats = wiki.fetch_stats(raw.target_title, target_lang)
    return ParallelParagraphPair(
        pair_id=pair_id_for(title, source_lang, target_lang),
        source_text=raw.source_text,
        target_text=raw.target_text,
        source_stats=source_stats,
        target_stats=target_stats,
        source_token_count=len(tokenize(raw.source_text)),
        target_token_count=len(tokenize(raw.target_text)),
    )


def mine(
    titles: list[str],
    cfg: MiningConfig,
    wiki,
    source_lang: str = "en",
    target_lang: str = "hy",
    max_workers: int = 4,
) -> tuple[list[ParallelParagraphPair], MiningReport]:
    """Fetch and gate every title; never aborts on a single failure.

    Output pairs are sorted by pair_id so results are independent of worker
    scheduling. The report accounts for every input title.
    """
    from .providers.base import NotParallelError, PageMissingError

    report = MiningReport()
    accepted: list[ParallelParagraphPair] = []

    def process(title: str):
        try:
            pair = build_pair(title, source_lang, target_lang, wiki)
        except NotParallelError:
            return ("reject", REASON_NOT_PARALLEL, title)
        except PageMissingError:
            return ("reject", REASON_PAGE_MISSING, title)
        except ProviderError as exc:
            return ("error", str(exc), title)
        verdict = accept_pair(pair, cfg)
        if verdict.accepted:
            return ("accept", pair, title)
        return ("reject", verdict.reason, title)

    if titles:
        workers = min(max_workers, len(titles))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(process, titles))
    else:
        results = []

    for kind, payload, title in results:
        if kind == "accept":
            accepted.append(payload)
            report.accepted += 1
        elif kind == "reject":
            report.rejected[payload] += 1
        else:
            report.rejected[REASON_PROVIDER_FAILED] += 1
            report.errors.append({"title": title, "error": payload})

    accepted.sort(key=lambda p: p.pair_id)
    return accepted, report
