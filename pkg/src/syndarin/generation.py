"""Question generation: prompt construction, output parsing and filtering.

The output wire format is numbered blocks of labeled lines::

    1.
    Q: <question>
    A1: <option>
    A2: <option>
    A3: <option>
    A4: <option>
    Answer: A2

Malformed blocks are skipped and counted, never propagated.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DataError, ProviderError
from .providers.llm import DecodingParams
from .records import McQaItem, ParallelParagraphPair, STAGE_GENERATED
from .textnorm import fold, normalize_question

DEMOS_REQUIRED = 10
DEMO_HEADER = "### Example"
TASK_HEADER = "### Task"


class EmptyOutputError(DataError):
    """Raised when no block of a generation output parses."""


@dataclass(frozen=True)
class Demonstration:
    paragraph: str
    question: str
    options: tuple[str, str, str, str]
    answer_index: int

    def __post_init__(self):
        if len(self.options) != 4 or not 0 <= self.answer_index < 4:
            raise ValueError("demonstration needs 4 options and a valid answer index")


@dataclass(frozen=True)
class PromptSpec:
    instructions: str
    demonstrations: tuple[Demonstration, ...]
    questions_per_paragraph: int = 10
    options_per_question: int = 4
    version: str = "unversioned"

    def __post_init__(self):
        if len(self.demonstrations) != DEMOS_REQUIRED:
            raise ValueError(f"exactly {DEMOS_REQUIRED} demonstrations required")
        if self.options_per_question != 4:
            raise ValueError("options_per_question must be 4")


@dataclass
class GenerationBatch:
    items: list[McQaItem]
    raw_output: str
    parse_failures: int = 0


def load_prompt_pack(path: Path | str | None = None) -> PromptSpec:
    """Load a prompt pack; ``None`` loads the packaged default."""
    if path is None:
        data = json.loads(
            resources.files("syndarin.prompts")
            .joinpath("default_pack.json")
            .read_text(encoding="utf-8")
        )
    else:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    demos = tuple(
        Demonstration(
            paragraph=d["paragraph"],
            question=d["question"],
            options=tuple(d["options"]),
            answer_index=d["answer_index"],
        )
        for d in data["demonstrations"]
    )
    return PromptSpec(
        instructions=data["instructions"],
        demonstrations=demos,
        questions_per_paragraph=data.get("questions_per_paragraph", 10),
        version=data.get("version", "unversioned"),
    )


def _format_block(paragraph, question, options, answer_index=None) -> str:
    lines = [f"Paragraph: {paragraph}", f"Q: {question}"]
    lines += [f"A{j + 1}: {opt}" for j, opt in enumerate(options)]
    if answer_index is not None:
        lines.append(f"Answer: A{answer_index + 1}")
    return "\n".join(lines)


def build_generation_prompt(spec: PromptSpec, paragraph: str) -> str:
    if not paragraph.strip():
        raise ValueError("paragraph must be nonempty")
    parts = [spec.instructions.strip(), ""]
    for i, demo in enumerate(spec.demonstrations, start=1):
        parts.append(f"{DEMO_HEADER} {i}")
        parts.append(
            _format_block(demo.paragraph, demo.question, demo.options, demo.answer_index)
        )
        parts.append("")
    n = spec.questions_per_paragraph
    parts.append(TASK_HEADER)
    parts.append(f"Paragraph: {' '.join(paragraph.split())}")
    parts.append(
        f"Write exactly {n} new question blocks about this paragraph, numbered "
        f"1. through {n}., each in the same Q/A1/A2/A3/A4/Answer format. "
        "Make the questions diverse and ensure every correct answer is a "
        "phrase copied verbatim from the paragraph."
    )
    return "\n".join(parts)


def _resolve_answer_key(key: str, options: list[str]) -> int | None:
    key = key.strip()
    folded = key.casefold()
    if len(folded) == 2 and folded[0] == "a" and folded[1] in "1234":
        return int(folded[1]) - 1
    if folded in ("1", "2", "3", "4"):
        return int(folded) - 1
    if len(folded) == 1 and folded in "abcd":
        return ord(folded) - ord("a")
    for idx, opt in enumerate(options):
        if fold(opt) == fold(key):
            return idx
    return None


def parse_generation(raw: str, pair_id: str, language: str = "en") -> GenerationBatch:
    """Extract well-formed blocks; malformed ones count as parse failures."""
    blocks: list[dict] = []
    current: dict | None = None
    for line in raw.splitlines():
        line = line.strip()
        if line.startswith("Q:"):
            if current is not None:
                blocks.append(current)
            current = {"question": line[2:].strip(), "options": {}, "answer": None}
        elif current is not None and len(line) > 3 and line[0] in "Aa" and line[1] in "1234" and line[2] == ":":
            current["options"][int(line[1])] = line[3:].strip()
        elif current is not None and line.lower().startswith("answer:"):
            current["answer"] = line.split(":", 1)[1].strip()
    if current is not None:
        blocks.append(current)

    items: list[McQaItem] = []
    failures = 0
    seq = 0
    for block in blocks:
        options = [block["options"].get(j, "") for j in (1, 2, 3, 4)]
        if not all(options) or block["answer"] is None:
            failures += 1
            continue
        correct = _resolve_answer_key(block["answer"], options)
        if correct is None:
            failures += 1
            continue
        try:
            item = McQaItem(
                item_id=f"{pair_id}:q{seq:03d}",
                pair_id=pair_id,
                question=block["question"],
                options=tuple(options),
                correct_index=correct,
                language=language,
                stage=STAGE_GENERATED,
            )
        except ValueError:
            failures += 1
            continue
        items.append(item)
        seq += 1

    if not items:
        raise EmptyOutputError(f"no block parsed for pair {pair_id}")
    return GenerationBatch(items=items, raw_output=raw, parse_failures=failures)


def dedup_questions(items: list[McQaItem]) -> list[McQaItem]:
    """Keep the first occurrence per normalized question, preserving order."""
    seen: set[str] = set()
    kept = []
    for item in items:
        key = normalize_question(item.question)
        if key in seen:
            continue
        seen.add(key)
        kept.append(item)
    return kept


def verbatim_answer_filter(item: McQaItem, paragraph: str) -> bool:
    """Keep iff the correct answer is a normalized substring of the paragraph."""
    return fold(item.answer) in fold(paragraph)


@dataclass
class GenerationReport:
    parsed: int = 0
    parse_failures: int = 0
    empty_outputs: int = 0
    provider_failures: int = 0
    after_dedup: int = 0
    after_verbatim: int = 0
    per_pair: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "parsed": self.parsed,
            "parse_failures": self.parse_failures,
            "empty_outputs": self.empty_outputs,
            "provider_failures": self.provider_failures,
            "after_dedup": self.after_dedup,
            "after_verbatim": self.after_verbatim,
            "per_pair": {k: self.per_pair[k] for k in sorted(self.per_pair)},
        }


def generate_items(
    pairs: list[ParallelParagraphPair],
    spec: PromptSpec,
    llm,
    params: DecodingParams,
    language: str = "en",
    max_workers: int = 4,
    transcript_sink=None,
) -> tuple[list[McQaItem], GenerationReport]:
    """Generate, parse, dedup and verbatim-filter questions for all pairs.

    Batches run concurrently; the merged corpus is processed in pair_id order
    so the result is schedule-independent.
    """
    report = GenerationReport()

    def run(pair: ParallelParagraphPair):
        prompt = build_generation_prompt(spec, pair.source_text)
        try:
            raw = llm.complete(prompt, params)
        except ProviderError as exc:
            return (pair, None, exc)
        return (pair, raw, None)

    ordered = sorted(pairs, key=lambda p: p.pair_id)
    if ordered:
        with ThreadPoolExecutor(max_workers=min(max_workers, len(ordered))) as pool:
            results = list(pool.map(run, ordered))
    else:
        results = []

    all_items: list[McQaItem] = []
    for pair, raw, exc in results:
        if exc is not None:
            report.provider_failures += 1
            report.per_pair[pair.pair_id] = {"error": str(exc)}
            continue
        if transcript_sink is not None:
            transcript_sink(pair.pair_id, raw)
        try:
            batch = parse_generation(raw, pair.pair_id, language=language)
        except EmptyOutputError:
            report.empty_outputs += 1
            report.per_pair[pair.pair_id] = {"parsed": 0, "parse_failures": None}
            continue
        report.parsed += len(batch.items)
        report.parse_failures += batch.parse_failures
        report.per_pair[pair.pair_id] = {
            "parsed": len(batch.items),
            "parse_failures": batch.parse_failures,
        }
        all_items.extend(batch.items)

    deduped = dedup_questions(all_items)
    report.after_dedup = len(deduped)

    paragraphs = {p.pair_id: p.source_text for p in pairs}
    kept = [
        item
        for item in deduped
        if verbatim_answer_filter(item, paragraphs[item.pair_id])
    ]
    report.after_verbatim = len(kept)
    return kept, report
