"""Inter-annotator agreement and the batch quality report."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..errors import DataError
from .models import (
    FLAG_FLAGGED,
    FLAG_KEPT,
    InsufficientAnnotatorsError,
    REASONS,
    UNANSWERABLE,
)


class LengthMismatchError(DataError):
    pass


class EmptyInputError(DataError):
    pass


def cohen_kappa(labels_a, labels_b) -> float:
    """Chance-corrected agreement between two label sequences.

    Computed from integer counts so the arithmetic is exact up to the final
    division: kappa = (n*agreements - sum_c a_c*b_c) / (n^2 - sum_c a_c*b_c).
    Two identical constant sequences agree perfectly by convention (1.0).
    """
    labels_a, labels_b = list(labels_a), list(labels_b)
    if len(labels_a) != len(labels_b):
        raise LengthMismatchError(
            f"label sequences differ in length: {len(labels_a)} vs {len(labels_b)}"
        )
    if not labels_a:
        raise EmptyInputError("label sequences must be nonempty")
    n = len(labels_a)
    agreements = sum(1 for a, b in zip(labels_a, labels_b) if a == b)
    counts_a = Counter(labels_a)
    counts_b = Counter(labels_b)
    chance = sum(counts_a[c] * counts_b.get(c, 0) for c in counts_a)
    denominator = n * n - chance
    if denominator == 0:
        # Both raters constant on the same label: perfect, un-correctable
        # agreement.
        return 1.0
    return (n * agreements - chance) / denominator


@dataclass
class AgreementReport:
    kappa: float
    kappa_binary: float
    observed_agreement: float
    per_category_agreement: dict
    flagged_unanswerable_rate: float
    kept_correct_rate: float
    reason_breakdown: dict
    annotators: list
    n_tasks: int

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "kappa_binary": self.kappa_binary,
            "observed_agreement": self.observed_agreement,
            "per_category_agreement": self.per_category_agreement,
            "flagged_unanswerable_rate": self.flagged_unanswerable_rate,
            "kept_correct_rate": self.kept_correct_rate,
            "reason_breakdown": self.reason_breakdown,
            "annotators": self.annotators,
            "n_tasks": self.n_tasks,
        }


def _verdict_label(record) -> str:
    return UNANSWERABLE if record.is_unanswerable else str(record.verdict)


def _binary_label(record) -> str:
    return UNANSWERABLE if record.is_unanswerable else "answerable"


def compute_agreement_report(tasks, records) -> AgreementReport:
    """Aggregate a completed batch: agreement, gate precision and reasons.

    Requires every task to carry records from at least two annotators.
    Agreement statistics use the pair of annotators with the widest coverage;
    population rates use every record.
    """
    by_task: dict[str, dict[str, object]] = {}
    for rec in records:
        by_task.setdefault(rec.task_id, {})[rec.annotator_id] = rec

    task_ids = [t.task_id for t in tasks]
    uncovered = [tid for tid in task_ids if len(by_task.get(tid, {})) < 2]
    if uncovered:
        raise InsufficientAnnotatorsError(
            f"{len(uncovered)} tasks lack two annotators (e.g. {uncovered[:3]})"
        )

    coverage = Counter()
    for annotations in by_task.values():
        coverage.update(annotations.keys())
    pair = sorted(coverage, key=lambda a: (-coverage[a], a))[:2]
    a1, a2 = sorted(pair)

    shared = [tid for tid in task_ids if a1 in by_task[tid] and a2 in by_task[tid]]
    seq_a = [_verdict_label(by_task[tid][a1]) for tid in shared]
    seq_b = [_verdict_label(by_task[tid][a2]) for tid in shared]
    kappa = cohen_kappa(seq_a, seq_b)
    kappa_binary = cohen_kappa(
        [_binary_label(by_task[tid][a1]) for tid in shared],
        [_binary_label(by_task[tid][a2]) for tid in shared],
    )
    observed = sum(1 for a, b in zip(seq_a, seq_b) if a == b) / len(shared)

    per_category = {}
    for label in sorted(set(seq_a) | set(seq_b)):
        either = sum(1 for a, b in zip(seq_a, seq_b) if label in (a, b))
        both = sum(1 for a, b in zip(seq_a, seq_b) if a == b == label)
        per_category[label] = both / either if either else 0.0

    flags = {t.task_id: t.hidden_flag for t in tasks}
    gold = {t.task_id: t.correct_index for t in tasks}
    all_records = [rec for annotations in by_task.values() for rec in annotations.values()]

    flagged_records = [r for r in all_records if flags[r.task_id] == FLAG_FLAGGED]
    kept_records = [r for r in all_records if flags[r.task_id] == FLAG_KEPT]
    flagged_rate = (
        sum(r.is_unanswerable for r in flagged_records) / len(flagged_records)
        if flagged_records
        else 0.0
    )
    kept_correct = (
        sum(r.verdict == gold[r.task_id] for r in kept_records) / len(kept_records)
        if kept_records
        else 0.0
    )

    # Reason percentages per population, over that population's unanswerable
    # records only; rows may sum past 100 because multiple reasons are allowed.
    breakdown = {}
    for name, population in (("Filtered", kept_records), ("Unfiltered", flagged_records)):
        unanswerable = [r for r in population if r.is_unanswerable]
        row = {}
        for reason in REASONS:
            cited = sum(reason in r.reasons for r in unanswerable)
            row[reason] = 100.0 * cited / len(unanswerable) if unanswerable else 0.0
        breakdown[name] = row

    return AgreementReport(
        kappa=kappa,
        kappa_binary=kappa_binary,
        observed_agreement=observed,
        per_category_agreement=per_category,
        flagged_unanswerable_rate=flagged_rate,
        kept_correct_rate=kept_correct,
        reason_breakdown=breakdown,
        annotators=[a1, a2],
        n_tasks=len(tasks),
    )
