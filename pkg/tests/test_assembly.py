import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syndarin.assembly import (
    SingleParagraphCorpusError,
    balance_answer_positions,
    position_counts,
    split_train_test,
    verify_dataset,
    write_dataset,
)
from syndarin.errors import DataError

from conftest import make_item


def _items(n, per_pair=None, stage="validated"):
    out = []
    for i in range(n):
        pair = f"p{i // per_pair}" if per_pair else f"p{i % 7}"
        out.append(
            make_item(
                item_id=f"{pair}:q{i:04d}",
                pair_id=pair,
                question=f"Question number {i}?",
                options=(f"opt{i}a", f"opt{i}b", f"opt{i}c", f"opt{i}d"),
                correct_index=i % 4,
                stage=stage,
            )
        )
    return out


class TestBalanceAnswerPositions:
    def test_divisible_case(self):
        balanced = balance_answer_positions(_items(8), seed=1)
        assert set(position_counts(balanced).values()) == {2}

    def test_1235_counts(self):
        balanced = balance_answer_positions(_items(1235), seed=3)
        counts = sorted(position_counts(balanced).values(), reverse=True)
        assert counts == [309, 309, 309, 308]

    def test_deterministic_per_seed(self):
        items = _items(57)
        once = balance_answer_positions(items, seed=42)
        twice = balance_answer_positions(items, seed=42)
        assert once == twice
        other = balance_answer_positions(items, seed=43)
        assert [i.correct_index for i in once] != [i.correct_index for i in other]

    def test_preserves_option_multiset_and_answer(self):
        items = _items(23)
        balanced = balance_answer_positions(items, seed=9)
        for before, after in zip(items, balanced):
            assert sorted(before.options) == sorted(after.options)
            assert before.answer == after.answer

    @given(n=st.integers(1, 200), seed=st.integers(0, 10))
    @settings(max_examples=30)
    def test_spread_at_most_one(self, n, seed):
        balanced = balance_answer_positions(_items(n), seed=seed)
        counts = position_counts(balanced)
        values = [counts.get(p, 0) for p in range(4)]
        assert max(values) - min(values) <= 1


class TestSplitTrainTest:
    def test_five_paragraphs_of_four(self):
        items = _items(20, per_pair=4)
        split = split_train_test(items, test_fraction=0.2, seed=0)
        assert len(split.test) == 4
        assert len({i.pair_id for i in split.test}) == 1
        assert len(split.train) == 16

    def test_disjoint_pair_ids(self):
        items = _items(60, per_pair=5)
        split = split_train_test(items, test_fraction=0.2, seed=5)
        assert {i.pair_id for i in split.train} & {i.pair_id for i in split.test} == set()

    def test_single_paragraph_raises(self):
        items = _items(10, per_pair=10)
        with pytest.raises(SingleParagraphCorpusError):
            split_train_test(items, seed=1)

    def test_empty_raises(self):
        with pytest.raises(DataError):
            split_train_test([], seed=1)

    def test_deterministic(self):
        items = _items(60, per_pair=5)
        a = split_train_test(items, seed=5)
        b = split_train_test(items, seed=5)
        assert [i.item_id for i in a.test] == [i.item_id for i in b.test]

    @given(
        group_sizes=st.lists(st.integers(1, 12), min_size=2, max_size=20),
        seed=st.integers(0, 20),
    )
    @settings(max_examples=60)
    def test_size_bound(self, group_sizes, seed):
        items = []
        k = 0
        for g, size in enumerate(group_sizes):
            for _ in range(size):
                items.append(
                    make_item(
                        item_id=f"g{g}:q{k:04d}",
                        pair_id=f"g{g}",
                        question=f"Question {k}?",
                        stage="validated",
                    )
                )
                k += 1
        split = split_train_test(items, test_fraction=0.2, seed=seed)
        target = round(0.2 * len(items))
        assert abs(len(split.test) - target) <= max(group_sizes) - 1
        assert {i.pair_id for i in split.train} & {i.pair_id for i in split.test} == set()
        assert len(split.train) + len(split.test) == len(items)


class TestWriteDataset:
    def _paragraphs(self, items):
        return {i.pair_id: f"paragraph for {i.pair_id}" for i in items}

    def test_round_trip(self, tmp_path):
        items = balance_answer_positions(_items(24, per_pair=4), seed=2)
        split = split_train_test(items, seed=3)
        write_dataset(split, tmp_path, self._paragraphs(items), {"counts": {}})
        train = [json.loads(l) for l in (tmp_path / "train.jsonl").read_text().splitlines()]
        test = [json.loads(l) for l in (tmp_path / "test.jsonl").read_text().splitlines()]
        assert len(train) == len(split.train)
        assert len(test) == len(split.test)
        assert train[0]["paragraph"].startswith("paragraph for")
        assert set(train[0]) == {
            "item_id", "pair_id", "paragraph", "question",
            "options", "correct_index", "language",
        }

    def test_verify_passes_on_good_dataset(self, tmp_path):
        items = balance_answer_positions(_items(24, per_pair=4), seed=2)
        split = split_train_test(items, seed=3)
        write_dataset(
            split,
            tmp_path,
            self._paragraphs(items),
            {"counts": {"generated": 30, "deduped": 28, "verbatim_kept": 26,
                        "translated": 25, "validated": 24}},
        )
        assert verify_dataset(tmp_path) == []

    def test_verify_catches_hash_mismatch(self, tmp_path):
        items = balance_answer_positions(_items(24, per_pair=4), seed=2)
        split = split_train_test(items, seed=3)
        write_dataset(split, tmp_path, self._paragraphs(items), {"counts": {}})
        with open(tmp_path / "train.jsonl", "a", encoding="utf-8") as fh:
            fh.write("\n")
        problems = verify_dataset(tmp_path)
        assert any("hash mismatch" in p for p in problems)

    def test_verify_catches_nondecreasing_counts(self, tmp_path):
        items = balance_answer_positions(_items(24, per_pair=4), seed=2)
        split = split_train_test(items, seed=3)
        write_dataset(
            split,
            tmp_path,
            self._paragraphs(items),
            {"counts": {"generated": 10, "deduped": 12}},
        )
        problems = verify_dataset(tmp_path)
        assert any("weakly decreasing" in p for p in problems)
