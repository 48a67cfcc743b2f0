"""Annotation domain types: blind tasks, verdicts and the reason taxonomy."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..errors import DataError

REASONS = (
    "PartiallyMissingInfo",
    "BadTranslation",
    "PartiallyCorrectAnswers",
    "SeveralCorrectAnswers",
    "DateMismatch",
    "Other",
)

UNANSWERABLE = "unanswerable"
FLAG_KEPT = "kept"
FLAG_FLAGGED = "flagged"


class InvalidReasonsError(DataError):
    pass


class UnknownTaskError(DataError):
    pass


class InsufficientRejectsError(DataError):
    pass


class InsufficientAnnotatorsError(DataError):
    pass


@dataclass(frozen=True)
class AnnotationTask:
    task_id: str
    batch_id: str
    paragraph: str
    question: str
    options: tuple[str, str, str, str]
    correct_index: int
    hidden_flag: str  # kept | flagged; never serialized toward annotators

    def annotator_payload(self) -> dict:
        """The blinded view: no flag, no gold answer."""
        return {
            "task_id": self.task_id,
            "batch_id": self.batch_id,
            "paragraph": self.paragraph,
            "question": self.question,
            "options": list(self.options),
        }

    def to_record(self) -> dict:
        payload = self.annotator_payload()
        payload["correct_index"] = self.correct_index
        payload["hidden_flag"] = self.hidden_flag
        return payload

    @classmethod
    def from_record(cls, rec: dict) -> "AnnotationTask":
        return cls(
            task_id=rec["task_id"],
            batch_id=rec["batch_id"],
            paragraph=rec["paragraph"],
            question=rec["question"],
            options=tuple(rec["options"]),
            correct_index=rec["correct_index"],
            hidden_flag=rec["hidden_flag"],
        )


@dataclass(frozen=True)
class AnnotationRecord:
    task_id: str
    annotator_id: str
    verdict: int | str  # option index or "unanswerable"
    reasons: tuple = ()
    timestamp: str = ""

    def __post_init__(self):
        if isinstance(self.verdict, bool) or not (
            (isinstance(self.verdict, int) and 0 <= self.verdict < 4)
            or self.verdict == UNANSWERABLE
        ):
            raise DataError(f"invalid verdict: {self.verdict!r}")
        unknown = [r for r in self.reasons if r not in REASONS]
        if unknown:
            raise InvalidReasonsError(f"unknown reasons: {unknown}")
        if self.verdict == UNANSWERABLE and not self.reasons:
            raise InvalidReasonsError("unanswerable verdicts need at least one reason")
        if self.verdict != UNANSWERABLE and self.reasons:
            raise InvalidReasonsError("answered verdicts must not carry reasons")

    @property
    def is_unanswerable(self) -> bool:
        return self.verdict == UNANSWERABLE

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id,
            "annotator_id": self.annotator_id,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "AnnotationRecord":
        return cls(
            task_id=rec["task_id"],
            annotator_id=rec["annotator_id"],
            verdict=rec["verdict"],
            reasons=tuple(rec.get("reasons", ())),
            timestamp=rec.get("timestamp", ""),
        )


def create_annotation_batch(
    test_records: list[dict],
    reject_records: list[dict],
    batch_id: str,
    n_flagged: int = 100,
    seed: int = 0,
) -> list[AnnotationTask]:
    """Blind-mix sampled rejects into the full test set and shuffle."""
    if len(reject_records) < n_flagged:
        raise InsufficientRejectsError(
            f"need {n_flagged} rejects, only {len(reject_records)} available"
        )
    rng = random.Random(seed)
    flagged = rng.sample(reject_records, n_flagged) if n_flagged else []
    entries = [(rec, FLAG_KEPT) for rec in test_records]
    entries += [(rec, FLAG_FLAGGED) for rec in flagged]
    rng.shuffle(entries)
    tasks = []
    for i, (rec, flag) in enumerate(entries):
        tasks.append(
            AnnotationTask(
                task_id=f"{batch_id}-t{i:04d}",
                batch_id=batch_id,
                paragraph=rec["paragraph"],
                question=rec["question"],
                options=tuple(rec["options"]),
                correct_index=rec["correct_index"],
                hidden_flag=flag,
            )
        )
    return tasks
