"""Final dataset assembly: answer-position balancing, the paragraph-disjoint
train/test split, and serialization with a reproducibility manifest."""

from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .records import McQaItem, dataset_record, read_jsonl, write_jsonl

OPTION_POSITIONS = 4


class SingleParagraphCorpusError(DataError):
    """A disjoint split needs at least two distinct paragraphs."""


@dataclass
class DatasetSplit:
    train: list[McQaItem]
    test: list[McQaItem]
    seed: int
    manifest: dict | None = None


def balance_answer_positions(items: list[McQaItem], seed: int) -> list[McQaItem]:
    """Round-robin the correct position through a seeded permutation of 0..3.

    Every position count ends within 1 of every other; options keep their
    relative order apart from the correct answer moving to its target slot.
    """
    rng = random.Random(seed)
    perm = rng.sample(range(OPTION_POSITIONS), OPTION_POSITIONS)
    out = []
    for k, item in enumerate(items):
        target = perm[k % OPTION_POSITIONS]
        answer = item.options[item.correct_index]
        rest = [opt for i, opt in enumerate(item.options) if i != item.correct_index]
        rest.insert(target, answer)
        out.append(
            McQaItem(
                item_id=item.item_id,
                pair_id=item.pair_id,
                question=item.question,
                options=tuple(rest),
                correct_index=target,
                language=item.language,
                stage=item.stage,
            )
        )
    return out


def split_train_test(
    items: list[McQaItem], test_fraction: float = 0.2, seed: int = 0
) -> DatasetSplit:
    """Group by paragraph, shuffle groups, greedily fill the test bucket.

    Whole groups move together so no paragraph straddles the split. A group
    joins the test set only while that strictly shrinks the distance to the
    target size, which bounds the size error by (largest group - 1).
    """
    if not items:
        raise DataError("cannot split an empty corpus")
    unvalidated = [i.item_id for i in items if i.stage != "validated"]
    if unvalidated:
        raise DataError(f"split expects validated items, got e.g. {unvalidated[:3]}")
    groups: dict[str, list[McQaItem]] = {}
    for item in items:
        groups.setdefault(item.pair_id, []).append(item)
    if len(groups) < 2:
        raise SingleParagraphCorpusError(
            "cannot build a paragraph-disjoint split from a single paragraph"
        )
    order = sorted(groups)
    rng = random.Random(seed)
    rng.shuffle(order)

    target = round(test_fraction * len(items))
    test_ids: set[str] = set()
    test_size = 0
    for pair_id in order:
        if test_size >= target:
            break
        size = len(groups[pair_id])
        if abs(target - (test_size + size)) < abs(target - test_size):
            test_ids.add(pair_id)
            test_size += size

    train, test = [], []
    for item in items:
        (test if item.pair_id in test_ids else train).append(item)
    return DatasetSplit(train=train, test=test, seed=seed)


def position_counts(items: list[McQaItem]) -> Counter:
    return Counter(item.correct_index for item in items)


def file_sha256(path: Path | str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_dataset(
    split: DatasetSplit,
    out_dir: Path | str,
    paragraphs: dict[str, str],
    manifest: dict | None = None,
) -> dict:
    """Write train.jsonl, test.jsonl and manifest.json; returns file hashes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_jsonl(
        out_dir / "train.jsonl",
        (dataset_record(it, paragraphs[it.pair_id]) for it in split.train),
    )
    write_jsonl(
        out_dir / "test.jsonl",
        (dataset_record(it, paragraphs[it.pair_id]) for it in split.test),
    )
    hashes = {
        "train.jsonl": file_sha256(out_dir / "train.jsonl"),
        "test.jsonl": file_sha256(out_dir / "test.jsonl"),
    }
    manifest = dict(manifest or {})
    manifest.setdefault("split", {})
    manifest["split"].update(
        {
            "seed": split.seed,
            "train_size": len(split.train),
            "test_size": len(split.test),
            "files": hashes,
        }
    )
    tmp = out_dir / "manifest.json.tmp"
    tmp.write_text(
        json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    tmp.replace(out_dir / "manifest.json")
    return hashes


def load_dataset_records(out_dir: Path | str) -> tuple[list[dict], list[dict]]:
    out_dir = Path(out_dir)
    return (
        list(read_jsonl(out_dir / "train.jsonl")),
        list(read_jsonl(out_dir / "test.jsonl")),
    )


def verify_dataset(out_dir: Path | str) -> list[str]:
    """Re-check the emitted dataset's invariants; returns violations (if any)."""
    out_dir = Path(out_dir)
    problems: list[str] = []
    for name in ("train.jsonl", "test.jsonl", "manifest.json"):
        if not (out_dir / name).exists():
            problems.append(f"missing file: {name}")
    if problems:
        return problems

    train, test = load_dataset_records(out_dir)
    train_pairs = {r["pair_id"] for r in train}
    test_pairs = {r["pair_id"] for r in test}
    overlap = train_pairs & test_pairs
    if overlap:
        problems.append(f"train/test paragraph overlap: {sorted(overlap)[:3]}")

    counts = Counter(r["correct_index"] for r in train + test)
    for pos in range(OPTION_POSITIONS):
        counts.setdefault(pos, 0)
    if max(counts.values()) - min(counts.values()) > 1:
        problems.append(f"answer positions unbalanced: {dict(sorted(counts.items()))}")

    seen_ids = set()
    for rec in train + test:
        if rec["item_id"] in seen_ids:
            problems.append(f"duplicate item_id: {rec['item_id']}")
        seen_ids.add(rec["item_id"])
        if len(rec["options"]) != OPTION_POSITIONS:
            problems.append(f"{rec['item_id']}: not 4 options")
        elif not 0 <= rec["correct_index"] < OPTION_POSITIONS:
            problems.append(f"{rec['item_id']}: correct_index out of range")

    manifest = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
    stage_counts = manifest.get("counts", {})
    chain = ["generated", "deduped", "verbatim_kept", "translated", "validated"]
    values = [stage_counts[s] for s in chain if s in stage_counts]
    if any(a < b for a, b in zip(values, values[1:])):
        problems.append(f"stage counts not weakly decreasing: {values}")

    recorded = manifest.get("split", {}).get("files", {})
    for name, digest in recorded.items():
        actual = file_sha256(out_dir / name)
        if actual != digest:
            problems.append(f"{name}: content hash mismatch")
    return problems
