"""Core dataset record types and their JSONL serialization.

All stage files are JSONL with one record per line, serialized with a fixed
field order and ``ensure_ascii=False`` so reruns are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator

STAGE_GENERATED = "generated"
STAGE_TRANSLATED = "translated"
STAGE_VALIDATED = "validated"
STAGES = (STAGE_GENERATED, STAGE_TRANSLATED, STAGE_VALIDATED)

OPTIONS_PER_QUESTION = 4


@dataclass(frozen=True)
class PageStats:
    """View/edit statistics for one wiki page over a trailing window."""

    title: str
    language: str
    view_count: int
    edit_count: int

    def __post_init__(self):
        if not self.title:
            raise ValueError("page title must be nonempty")
        if self.view_count < 0 or self.edit_count < 0:
            raise ValueError("page statistics must be nonnegative")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    model_id: str

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("embedding must be nonempty")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("embedding values must be finite")


@dataclass(frozen=True)
class ParallelParagraphPair:
    """Intro paragraphs of one article in the source and target language."""

    pair_id: str
    source_text: str
    target_text: str
    source_stats: PageStats
    target_stats: PageStats
    source_token_count: int
    target_token_count: int


@dataclass(frozen=True)
class McQaItem:
    """One multiple-choice question with exactly four ordered options."""

    item_id: str
    pair_id: str
    question: str
    options: tuple[str, str, str, str]
    correct_index: int
    language: str
    stage: str

    def __post_init__(self):
        if not self.question.strip():
            raise ValueError("question must be nonempty")
        if len(self.options) != OPTIONS_PER_QUESTION:
            raise ValueError("exactly 4 options required")
        if len(set(self.options)) != OPTIONS_PER_QUESTION:
            raise ValueError("options must be pairwise distinct")
        if not 0 <= self.correct_index < OPTIONS_PER_QUESTION:
            raise ValueError("correct_index out of range")
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")

    @property
    def answer(self) -> str:
        return self.options[self.correct_index]

    def with_stage(self, stage: str) -> "McQaItem":
        return replace(self, stage=stage)


def pair_to_record(pair: ParallelParagraphPair) -> dict:
    return {
        "pair_id": pair.pair_id,
        "source_text": pair.source_text,
        "target_text": pair.target_text,
        "source_stats": stats_to_record(pair.source_stats),
        "target_stats": stats_to_record(pair.target_stats),
        "source_token_count": pair.source_token_count,
        "target_token_count": pair.target_token_count,
    }


def pair_from_record(rec: dict) -> ParallelParagraphPair:
    return ParallelParagraphPair(
        pair_id=rec["pair_id"],
        source_text=rec["source_text"],
        target_text=rec["target_text"],
        source_stats=stats_from_record(rec["source_stats"]),
        target_stats=stats_from_record(rec["target_stats"]),
        source_token_count=rec["source_token_count"],
        target_token_count=rec["target_token_count"],
    )


def stats_to_record(stats: PageStats) -> dict:
    return {
        "title": stats.title,
        "language": stats.language,
        "view_count": stats.view_count,
        "edit_count": stats.edit_count,
    }


def stats_from_record(rec: dict) -> PageStats:
    return PageStats(
        title=rec["title"],
        language=rec["language"],
        view_count=rec["view_count"],
        edit_count=rec["edit_count"],
    )


def item_to_record(item: McQaItem) -> dict:
    return {
        "item_id": item.item_id,
        "pair_id": item.pair_id,
        "question": item.question,
        "options": list(item.options),
        "correct_index": item.correct_index,
        "language": item.language,
        "stage": item.stage,
    }


def item_from_record(rec: dict) -> McQaItem:
    return McQaItem(
        item_id=rec["item_id"],
        pair_id=rec["pair_id"],
        question=rec["question"],
        options=tuple(rec["options"]),
        correct_index=rec["correct_index"],
        language=rec["language"],
        stage=rec["stage"],
    )


def dataset_record(item: McQaItem, paragraph: str) -> dict:
    """Final dataset schema: the item joined with its target paragraph."""
    return {
        "item_id": item.item_id,
        "pair_id": item.pair_id,
        "paragraph": paragraph,
        "question": item.question,
        "options": list(item.options),
        "correct_index": item.correct_index,
        "language": item.language,
    }


def dumps_record(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False)


def write_jsonl(path: Path | str, records: Iterable[dict]) -> int:
    """Write records atomically (temp file then rename). Returns the count."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    n = 0
    with open(tmp, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(dumps_record(rec))
            fh.write("\n")
            n += 1
    tmp.replace(path)
    return n


def read_jsonl(path: Path | str) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
