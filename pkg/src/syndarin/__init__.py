"""syndarin: build, validate and benchmark multiple-choice QA datasets for
low-resource languages from parallel wiki paragraphs."""

from .records import (
    EmbeddingVector,
    McQaItem,
    PageStats,
    ParallelParagraphPair,
)

__version__ = "0.1.0"

__all__ = [
    "EmbeddingVector",
    "McQaItem",
    "PageStats",
    "ParallelParagraphPair",
    "__version__",
]
