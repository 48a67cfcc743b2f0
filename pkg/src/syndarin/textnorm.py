"""Text normalization shared by the dedup, verbatim and fuzzy matchers."""

# Terminal punctuation stripped when normalizing questions. Includes the
# Armenian question mark (U+055E) and full stop (U+0589).
_TRAILING_PUNCT = ".?!,;:…՞։"


def collapse_whitespace(text: str) -> str:
    """Collapse runs of Unicode whitespace to single spaces and trim."""
    return " ".join(text.split())


def fold(text: str) -> str:
    """Case-fold and whitespace-collapse; the comparison form for matching."""
    return collapse_whitespace(text).casefold()


def normalize_question(text: str) -> str:
    """Comparison key for question dedup: folded, trailing punctuation stripped."""
    return fold(text).rstrip(_TRAILING_PUNCT).rstrip()
