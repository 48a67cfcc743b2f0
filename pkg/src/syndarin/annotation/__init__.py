from .agreement import (
    AgreementReport,
    EmptyInputError,
    LengthMismatchError,
    cohen_kappa,
    compute_agreement_report,
)
from .models import (
    AnnotationRecord,
    AnnotationTask,
    FLAG_FLAGGED,
    FLAG_KEPT,
    InsufficientAnnotatorsError,
    InsufficientRejectsError,
    InvalidReasonsError,
    REASONS,
    UNANSWERABLE,
    UnknownTaskError,
    create_annotation_batch,
)
from .store import AnnotationStore

__all__ = [
    "AgreementReport",
    "AnnotationRecord",
    "AnnotationStore",
    "AnnotationTask",
    "EmptyInputError",
    "FLAG_FLAGGED",
    "FLAG_KEPT",
    "InsufficientAnnotatorsError",
    "InsufficientRejectsError",
    "InvalidReasonsError",
    "LengthMismatchError",
    "REASONS",
    "UNANSWERABLE",
    "UnknownTaskError",
    "cohen_kappa",
    "compute_agreement_report",
    "create_annotation_batch",
]
