"""Levenshtein distance and corpus-level CER/WER"""

import itertools
import random
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from app.exceptions import EmptyReference, LengthMismatch
from app.services.metrics import copy_baseline, edit_distance, evaluate
from app.services.normalizer import joint_table

words = st.text(alphabet="abc", max_size=8)


def naive_distance(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def rest(i: int, j: int) -> int:
        if i == len(a) or j == len(b):
            return len(a) - i + len(b) - j
        return min(
            rest(i + 1, j + 1) + (a[i] != b[j]),
            rest(i + 1, j) + 1,
            rest(i, j + 1) + 1,
        )
    return rest(0, 0)


def _strings(max_len):
    for n in range(max_len + 1):
        for chars in itertools.product("abc", repeat=n):
            yield "".join(chars)


def test_matches_exhaustive_recursion():
    strings = list(_strings(4))
    for a in strings:
        for b in strings:
            assert edit_distance(a, b) == naive_distance(a, b), (a, b)


def test_matches_recursion_on_sampled_pairs_up_to_six():
    strings = list(_strings(6))
    rng = random.Random(0)
    for _ in range(100_000):
        a, b = rng.choice(strings), rng.choice(strings)
        assert edit_distance(a, b) == naive_distance(a, b), (a, b)


def test_simple_distances():
    assert edit_distance("abc", "abc") == 0
    assert edit_distance("", "ab") == 2
    assert edit_distance(["ba", "ma"], ["ba"]) == 1


@given(words, words, words)
def test_metric_axioms(a, b, c):
    assert edit_distance(a, a) == 0
    assert edit_distance(a, b) == edit_distance(b, a)
    assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)
    assert edit_distance(a, b) <= max(len(a), len(b))


def test_identical_corpus():
    report = evaluate(["ba ma", "nu"], ["ba ma", "nu"])
    assert report.cer == 0
    assert report.wer == 0
    assert report.sentences == 2


def test_one_missing_character():
    report = evaluate(["ba"], ["baa"])
    assert report.cer == pytest.approx(33.3333)
    assert report.wer == 100
    assert report.total_char_edits == 1
    assert report.total_ref_chars == 3


def test_wer_can_exceed_hundred():
    report = evaluate(["a b c"], ["d"])
    assert report.wer > 100


def test_micro_average_ignores_order():
    hyps, refs = ["ba", "mama nu", "x"], ["baa", "mama ni", "y z"]
    forward = evaluate(hyps, refs)
    backward = evaluate(hyps[::-1], refs[::-1])
    assert forward == backward


def test_wrong_diacritic_costs_one_edit():
    report = evaluate(["\u00e1"], ["\u00e0"])
    assert report.total_char_edits == 1
    assert report.total_ref_chars == 2


def test_normalized_scoring_counts_digraph_once(official):
    table = joint_table(official)
    assert evaluate(["nda"], ["mba"], table=table).total_char_edits == 1
    assert evaluate(["nda"], ["mba"]).total_char_edits == 2


def test_length_mismatch():
    with pytest.raises(LengthMismatch) as info:
        evaluate(["a", "b"], ["a"])
    assert "2" in str(info.value) and "1" in str(info.value)


def test_empty_reference():
    with pytest.raises(EmptyReference):
        evaluate([""], [""])


def test_copy_baseline():
    report = copy_baseline(["ba"], ["baa"])
    assert report.total_char_edits == 1
