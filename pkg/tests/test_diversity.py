import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from syndarin.diversity import CATEGORIES, render_table, tag_question_type, type_frequency

from conftest import FIXTURES, make_item


class TestTagQuestionType:
    def test_leading_interrogative(self):
        assert tag_question_type("Who wrote the book?") == "Who"

    def test_table_fixture_question(self):
        q = "What is the primary modality used to convey meaning in sign languages?"
        assert tag_question_type(q) == "What"

    def test_no_interrogative_head(self):
        assert tag_question_type("Name the capital.") == "General"

    def test_fronted_interrogative_in_window(self):
        assert tag_question_type("In what year did the metro open?") == "What"

    def test_interrogative_beyond_window_is_general(self):
        assert tag_question_type("The committee asked what happened next?") == "General"

    def test_case_folding(self):
        assert tag_question_type("WHICH option is right?") == "Which"

    def test_contraction(self):
        assert tag_question_type("What's the tallest peak?") == "What"

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            tag_question_type("   ")

    def test_forty_question_fixture_agrees(self):
        fixture = json.loads(
            (FIXTURES / "question_types.json").read_text(encoding="utf-8")
        )
        assert len(fixture) == 40
        for entry in fixture:
            assert tag_question_type(entry["question"]) == entry["label"], entry


class TestTypeFrequency:
    def test_empty_list_all_zeros(self):
        counts = type_frequency([])
        assert set(counts) == set(CATEGORIES)
        assert all(v == 0 for v in counts.values())

    def test_simple_counts(self):
        items = [
            make_item(item_id="a", question="Who is it?"),
            make_item(item_id="b", question="Who was there?"),
            make_item(item_id="c", question="Why though?"),
        ]
        counts = type_frequency(items)
        assert counts["Who"] == 2
        assert counts["Why"] == 1
        assert sum(counts.values()) == 3

    def test_column_order(self):
        counts = type_frequency([])
        assert tuple(counts) == CATEGORIES

    @given(
        heads=st.lists(
            st.sampled_from(
                ["Who", "Where", "What", "When", "Which", "How", "Why", "Name", "Is"]
            ),
            max_size=40,
        )
    )
    def test_total_preservation_and_order_independence(self, heads):
        items = [
            make_item(item_id=f"i{k}", question=f"{head} question {k}?")
            for k, head in enumerate(heads)
        ]
        counts = type_frequency(items)
        assert sum(counts.values()) == len(items)
        reversed_counts = type_frequency(list(reversed(items)))
        assert counts == reversed_counts


def test_render_table_alignment():
    counts = {cat: i for i, cat in enumerate(CATEGORIES)}
    table = render_table(counts)
    header, values = table.splitlines()
    assert header.split() == list(CATEGORIES)
    assert values.split() == [str(i) for i in range(len(CATEGORIES))]
