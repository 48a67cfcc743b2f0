import json
from pathlib import Path

import pytest

from syndarin.records import McQaItem, PageStats, ParallelParagraphPair

FIXTURES = Path(__file__).parent / "fixtures"


def make_item(
    item_id="p1:q000",
    pair_id="p1",
    question="What is the primary modality?",
    options=("Visual-manual", "Auditory-vocal", "Tactile", "Olfactory"),
    correct_index=0,
    language="en",
    stage="generated",
):
    return McQaItem(
        item_id=item_id,
        pair_id=pair_id,
        question=question,
        options=tuple(options),
        correct_index=correct_index,
        language=language,
        stage=stage,
    )


def make_pair(
    pair_id="p1",
    source_text="Sign languages are natural languages with their own grammar.",
    target_text=None,
    views=1500,
    edits=7,
    source_tokens=None,
    target_tokens=None,
):
    if target_text is None:
        target_text = source_text
    stats = lambda lang: PageStats(
        title=pair_id, language=lang, view_count=views, edit_count=edits
    )
    return ParallelParagraphPair(
        pair_id=pair_id,
        source_text=source_text,
        target_text=target_text,
        source_stats=stats("en"),
        target_stats=stats("hy"),
        source_token_count=(
            source_tokens if source_tokens is not None else len(source_text.split())
        ),
        target_token_count=(
            target_tokens if target_tokens is not None else len(target_text.split())
        ),
    )


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def run_config(tmp_path):
    """A ready-to-run mock-provider config in a temp workspace."""
    from syndarin.config import load_config

    ws = tmp_path / "ws"
    ws.mkdir()
    (ws / "titles.txt").write_text(
        (FIXTURES / "titles_10.txt").read_text(encoding="utf-8"), encoding="utf-8"
    )
    doc = {
        "workspace_dir": str(ws),
        "source_lang": "en",
        "target_lang": "hy",
        "titles_file": "titles.txt",
        "seeds": {"balance": 11, "split": 22, "bench": 33, "annotation": 44},
        "mining": {"k_dm": 40, "min_views": 1000, "min_edits": 5},
        "generation": {"questions_per_paragraph": 10, "model_id": "mock-gen"},
        "validation": {"k_fuzz": 0.8, "k_sim": 0.02},
        "test_fraction": 0.2,
        "providers": {
            "mode": "mock",
            "mock_articles": str((FIXTURES / "mock_articles.json").resolve()),
        },
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return load_config(path)
