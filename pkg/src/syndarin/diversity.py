"""Question-type frequency analysis over any item set."""

from __future__ import annotations

from .records import McQaItem

# Serialization order for reports.
CATEGORIES = ("Who", "Where", "What", "When", "Which", "How", "General", "Why")

_INTERROGATIVES = {
    "who": "Who",
    "where": "Where",
    "what": "What",
    "when": "When",
    "which": "Which",
    "how": "How",
    "why": "Why",
}

_HEAD_WINDOW = 3  # tokens scanned for the interrogative head
_EDGE_PUNCT = ".,;:!?\"'()[]‘’“”՞։"


def tag_question_type(question: str) -> str:
    """Category of the interrogative head within the first three tokens.

    Catches fronted forms like "In what year ..."; anything without an
    interrogative head in the window is General.
    """
    if not question.strip():
        raise ValueError("question must be nonempty")
    for token in question.split()[:_HEAD_WINDOW]:
        word = token.casefold().strip(_EDGE_PUNCT)
        word = word.split("'")[0]  # "what's" -> "what"
        if word in _INTERROGATIVES:
            return _INTERROGATIVES[word]
    return "General"


def type_frequency(items: list[McQaItem]) -> dict[str, int]:
    """Counts per category, in report column order; totals preserve input size."""
    counts = {cat: 0 for cat in CATEGORIES}
    for item in items:
        counts[tag_question_type(item.question)] += 1
    return counts


def render_table(counts: dict[str, int]) -> str:
    """Aligned two-row text table in the standard column order."""
    cols = [(cat, str(counts.get(cat, 0))) for cat in CATEGORIES]
    widths = [max(len(a), len(b)) for a, b in cols]
    header = "  ".join(cat.ljust(w) for (cat, _), w in zip(cols, widths))
    values = "  ".join(val.ljust(w) for (_, val), w in zip(cols, widths))
    return f"{header}\n{values}"
