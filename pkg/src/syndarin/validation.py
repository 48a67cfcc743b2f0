"""Translation of generated items and the two-signal quality gate.

An item survives when its translated answer both fuzzily appears inside the
target-language paragraph and is semantically close to it. The fuzzy score is
1 - d/|needle| where d is the smallest Levenshtein distance between the
needle and any contiguous substring of the haystack.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import DataError, ProviderError
from .records import EmbeddingVector, McQaItem, STAGE_GENERATED, STAGE_TRANSLATED
from .textnorm import fold

VERDICT_KEPT = "kept"
VERDICT_REJECTED_FUZZY = "rejected_fuzzy"
VERDICT_REJECTED_SIMILARITY = "rejected_similarity"
VERDICT_REJECTED_BOTH = "rejected_both"

GATE_MODE_ALL = "all"  # both scores must clear their thresholds
GATE_MODE_ANY = "any"  # one clearing score suffices


class EmptyNeedleError(DataError):
    pass


class ZeroVectorError(DataError):
    pass


@dataclass
class ValidationConfig:
    k_fuzz: float = 0.8
    k_sim: float = 0.5
    gate_mode: str = GATE_MODE_ALL

    def __post_init__(self):
        if not 0.0 <= self.k_fuzz <= 1.0:
            raise ValueError("k_fuzz must be in [0, 1]")
        if not -1.0 <= self.k_sim <= 1.0:
            raise ValueError("k_sim must be in [-1, 1]")
        if self.gate_mode not in (GATE_MODE_ALL, GATE_MODE_ANY):
            raise ValueError("gate_mode must be 'all' or 'any'")


@dataclass(frozen=True)
class ValidationReport:
    item_id: str
    fuzzy_score: float
    similarity: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "fuzzy_score": self.fuzzy_score,
            "similarity": self.similarity,
            "verdict": self.verdict,
        }


def fuzzy_substring_score(needle: str, haystack: str) -> float:
    """Best normalized match of needle against any substring of haystack.

    Computed by semi-global alignment: leading and trailing characters of the
    haystack are free, edits inside the window cost 1. Both texts are
    case-folded and whitespace-collapsed first.
    """
    needle = fold(needle)
    haystack = fold(haystack)
    if not needle:
        raise EmptyNeedleError("needle must be nonempty")
    m, n = len(needle), len(haystack)
    if n == 0:
        return 0.0
    # prev[j] = min edit distance between needle[:i] and any suffix of
    # haystack[:j]; row 0 is free so a match may start anywhere.
    prev = [0] * (n + 1)
    for i in range(1, m + 1):
        ch = needle[i - 1]
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            cost = 0 if ch == haystack[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    d_infix = min(prev)
    return max(0.0, min(1.0, 1.0 - d_infix / m))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if len(a.values) != len(b.values):
        raise DataError("embedding dimensionality mismatch")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    norm_a = math.sqrt(sum(x * x for x in a.values))
    norm_b = math.sqrt(sum(y * y for y in b.values))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("cosine undefined for all-zero embedding")
    return dot / (norm_a * norm_b)


def semantic_similarity(answer: str, paragraph: str, embedder) -> float:
    if not answer or not paragraph:
        raise DataError("answer and paragraph must be nonempty")
    return cosine(embedder.embed(answer), embedder.embed(paragraph))


def gate_verdict(fuzzy_score: float, similarity: float, cfg: ValidationConfig) -> str:
    fuzzy_ok = fuzzy_score > cfg.k_fuzz
    sim_ok = similarity > cfg.k_sim
    if cfg.gate_mode == GATE_MODE_ANY:
        return VERDICT_KEPT if (fuzzy_ok or sim_ok) else VERDICT_REJECTED_BOTH
    if fuzzy_ok and sim_ok:
        return VERDICT_KEPT
    if not fuzzy_ok and not sim_ok:
        return VERDICT_REJECTED_BOTH
    return VERDICT_REJECTED_FUZZY if not fuzzy_ok else VERDICT_REJECTED_SIMILARITY


def validate_item(
    item: McQaItem, paragraph: str, cfg: ValidationConfig, embedder
) -> ValidationReport:
    if item.stage != STAGE_TRANSLATED:
        raise DataError(f"expected a translated item, got stage={item.stage}")
    fuzzy = fuzzy_substring_score(item.answer, paragraph)
    similarity = semantic_similarity(item.answer, paragraph, embedder)
    return ValidationReport(
        item_id=item.item_id,
        fuzzy_score=fuzzy,
        similarity=similarity,
        verdict=gate_verdict(fuzzy, similarity, cfg),
    )


def translate_item(item: McQaItem, target: str, translator, source: str = "en") -> McQaItem:
    """Translate question and options independently; the answer slot is stable."""
    if item.stage != STAGE_GENERATED:
        raise DataError(f"expected a generated item, got stage={item.stage}")
    question = translator.translate(item.question, source, target)
    options = tuple(translator.translate(opt, source, target) for opt in item.options)
    return McQaItem(
        item_id=item.item_id,
        pair_id=item.pair_id,
        question=question,
        options=options,
        correct_index=item.correct_index,
        language=target,
        stage=STAGE_TRANSLATED,
    )


def translate_items(
    items: list[McQaItem],
    target: str,
    translator,
    source: str = "en",
    max_workers: int = 4,
) -> tuple[list[McQaItem], list[dict]]:
    """Translate all items; provider failures exclude the item and are reported."""

    def run(item: McQaItem):
        try:
            return (translate_item(item, target, translator, source=source), None)
        except ProviderError as exc:
            return (None, {"item_id": item.item_id, "error": str(exc)})

    if not items:
        return [], []
    with ThreadPoolExecutor(max_workers=min(max_workers, len(items))) as pool:
        results = list(pool.map(run, items))
    translated = [t for t, _ in results if t is not None]
    failures = [f for _, f in results if f is not None]
    return translated, failures


def validate_items(
    items: list[McQaItem],
    paragraphs: dict[str, str],
    cfg: ValidationConfig,
    embedder,
) -> tuple[list[McQaItem], list[ValidationReport]]:
    """Validate in item_id order; reports cover every input item."""
    ordered = sorted(items, key=lambda it: it.item_id)
    reports = []
    kept = []
    for item in ordered:
        report = validate_item(item, paragraphs[item.pair_id], cfg, embedder)
        reports.append(report)
        if report.verdict == VERDICT_KEPT:
            kept.append(item.with_stage("validated"))
    return kept, reports
