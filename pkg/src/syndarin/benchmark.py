"""Few-shot evaluation harness over the emitted dataset files.

Operates on dataset records (the train.jsonl/test.jsonl schema) rather than
in-memory items so externally produced prediction files can be scored the
same way.
"""

from __future__ import annotations

import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import DataError
from .providers.llm import DecodingParams
from .textnorm import fold

ALLOWED_SHOTS = (0, 2, 4, 6)
OPTION_LETTERS = "ABCD"

PROBE_FULL = "full"
PROBE_QUESTION_ONLY = "question_only"
PROBE_PARAGRAPH_ONLY = "paragraph_only"
PROBE_VARIANTS = (PROBE_FULL, PROBE_QUESTION_ONLY, PROBE_PARAGRAPH_ONLY)


class InsufficientDemosError(DataError):
    pass


class CoverageMismatchError(DataError):
    pass


class LeakageError(DataError):
    pass


@dataclass
class EvalRun:
    model_id: str
    k_shots: int
    seed: int
    predictions: list = field(default_factory=list)  # (item_id, index or None)
    accuracy: float = 0.0
    unparseable_count: int = 0

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "k_shots": self.k_shots,
            "seed": self.seed,
            "accuracy": self.accuracy,
            "unparseable_count": self.unparseable_count,
            "predictions": [
                {"item_id": item_id, "chosen_index": chosen}
                for item_id, chosen in self.predictions
            ],
        }


_INSTRUCTION = (
    "Answer the multiple-choice question using the paragraph. "
    "Reply with the letter of the correct option."
)


def _record_block(record: dict, with_answer: bool) -> str:
    lines = [f"Paragraph: {record['paragraph']}", f"Question: {record['question']}"]
    for letter, option in zip(OPTION_LETTERS, record["options"]):
        lines.append(f"{letter}. {option}")
    lines.append(
        f"Answer: {OPTION_LETTERS[record['correct_index']]}" if with_answer else "Answer:"
    )
    return "\n".join(lines)


def sample_demos(train: list[dict], k: int, seed: int, item_id: str) -> list[dict]:
    """Per-item demonstration sample, deterministic in (seed, item_id)."""
    if k == 0:
        return []
    if len(train) < k:
        raise InsufficientDemosError(f"need {k} demos, train has {len(train)}")
    rng = random.Random(f"{seed}:{item_id}")
    return rng.sample(train, k)


def build_fewshot_prompt(item: dict, demos: list[dict], k: int) -> str:
    if k not in ALLOWED_SHOTS:
        raise DataError(f"k must be one of {ALLOWED_SHOTS}")
    if len(demos) != k:
        raise InsufficientDemosError(f"expected {k} demos, got {len(demos)}")
    parts = [_INSTRUCTION, ""]
    for demo in demos:
        parts.append(_record_block(demo, with_answer=True))
        parts.append("")
    parts.append(_record_block(item, with_answer=False))
    return "\n".join(parts)


_ANSWER_PREFIX = re.compile(
    r"^\s*(?:the\s+)?(?:final\s+)?answer(?:\s+is)?\s*[:\-]?\s*", re.IGNORECASE
)
_LEAD_LETTER = re.compile(r"^[\(\[]?([A-Da-d])(?![\w'])")
_LEAD_NUMBER = re.compile(r"^[\(\[]?([1-4])(?!\d)")


def parse_choice(model_output: str, options: list[str]) -> int | None:
    """First match among a leading option letter, an option number, or the
    longest option text present in the output; None when nothing matches."""
    text = _ANSWER_PREFIX.sub("", model_output.strip())
    match = _LEAD_LETTER.match(text)
    if match:
        return OPTION_LETTERS.index(match.group(1).upper())
    match = _LEAD_NUMBER.match(text)
    if match:
        return int(match.group(1)) - 1
    haystack = fold(model_output)
    best: tuple[int, int] | None = None
    for idx, option in enumerate(options):
        needle = fold(option)
        if needle and needle in haystack:
            if best is None or len(needle) > best[1]:
                best = (idx, len(needle))
    return best[0] if best else None


def score_accuracy(predictions: list, gold: list[dict]) -> tuple[float, int]:
    """Accuracy over the gold records; unparseable predictions count as wrong."""
    if not gold:
        raise DataError("gold set must be nonempty")
    gold_by_id = {r["item_id"]: r for r in gold}
    pred_ids = [item_id for item_id, _ in predictions]
    if sorted(pred_ids) != sorted(gold_by_id):
        raise CoverageMismatchError("predictions do not cover the gold set exactly")
    correct = 0
    unparseable = 0
    for item_id, chosen in predictions:
        if chosen is None:
            unparseable += 1
        elif chosen == gold_by_id[item_id]["correct_index"]:
            correct += 1
    return correct / len(gold), unparseable


def run_eval(
    test: list[dict],
    train: list[dict],
    llm,
    model_id: str,
    k_shots: int,
    seed: int,
    max_workers: int = 4,
) -> EvalRun:
    """Evaluate a model on the test records with k-shot prompting.

    Demonstrations come from train only; a per-run leakage check enforces it.
    """
    if k_shots not in ALLOWED_SHOTS:
        raise DataError(f"k_shots must be one of {ALLOWED_SHOTS}")
    test_ids = {r["item_id"] for r in test}
    params = DecodingParams(model_id=model_id, temperature=0.0)

    def evaluate(record: dict):
        demos = sample_demos(train, k_shots, seed, record["item_id"])
        leaked = {d["item_id"] for d in demos} & test_ids
        if leaked:
            raise LeakageError(f"demo items leak into test: {sorted(leaked)[:3]}")
        prompt = build_fewshot_prompt(record, demos, k_shots)
        output = llm.complete(prompt, params)
        return (record["item_id"], parse_choice(output, record["options"]))

    ordered = sorted(test, key=lambda r: r["item_id"])
    with ThreadPoolExecutor(max_workers=min(max_workers, max(1, len(ordered)))) as pool:
        predictions = list(pool.map(evaluate, ordered))

    accuracy, unparseable = score_accuracy(predictions, test)
    return EvalRun(
        model_id=model_id,
        k_shots=k_shots,
        seed=seed,
        predictions=predictions,
        accuracy=accuracy,
        unparseable_count=unparseable,
    )


def blank_field(record: dict, variant: str) -> dict:
    """Copy of a dataset record with the variant's omitted field blanked."""
    out = dict(record)
    if variant == PROBE_QUESTION_ONLY:
        out["paragraph"] = ""
    elif variant == PROBE_PARAGRAPH_ONLY:
        out["question"] = ""
    elif variant != PROBE_FULL:
        raise DataError(f"unknown probe variant {variant!r}")
    return out


def build_bias_probes(train: list[dict], test: list[dict]) -> dict:
    """All three probe variants of both splits, record counts preserved."""
    probes = {}
    for variant in PROBE_VARIANTS:
        probes[variant] = {
            "train": [blank_field(r, variant) for r in train],
            "test": [blank_field(r, variant) for r in test],
        }
    return probes
