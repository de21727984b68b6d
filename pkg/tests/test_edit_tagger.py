"""Edit-tag derivation, application and iterative refinement"""

import pytest
from hypothesis import given, strategies as st

from app.exceptions import DanglingMerge, LeadingInsertUnsupported, TagFormatError
from app.models.tagging import START_TOKEN, EditTag, EditTagKind, TaggedSentence
from app.services.edit_tagger import (
    GoldTagPredictor,
    UnigramTagPredictor,
    align,
    alignment_cost,
    apply_tags,
    derive_tags,
    iterate,
    parse_tags,
    read_tagged,
    resolve_conflicts,
    tokenize,
    write_tagged,
)
from app.services.metrics import edit_distance

tokens = st.lists(st.sampled_from(["a", "b", "ba", "ma", "a-b", "ba-ma"]), max_size=6)

SOURCE = tokenize("A forty years old man go work .")
TARGET = tokenize("A forty-year-old man goes to work .")


def test_forty_year_old_reconstructs():
    sentence = derive_tags(SOURCE, TARGET)
    assert apply_tags(sentence) == TARGET


def test_forty_year_old_uses_merges():
    sentence = derive_tags(SOURCE, TARGET)
    assert sentence.tokens[0] == START_TOKEN
    years = sentence.tokens.index("years")
    assert sentence.tags[years] == (EditTag.replace("year"), EditTag.merge_hyphen())
    forty = sentence.tokens.index("forty")
    assert EditTag.merge_hyphen() in sentence.tags[forty]


def test_replace_then_append():
    sentence = TaggedSentence(tokens=("go",), tags=((EditTag.replace("goes"), EditTag.append("to")),))
    assert apply_tags(sentence) == ["goes", "to"]


def test_all_keep_is_identity():
    sentence = TaggedSentence(tokens=(START_TOKEN, "a", "b"), tags=((EditTag.keep(),),) * 3)
    assert apply_tags(sentence) == ["a", "b"]


@given(tokens, tokens)
def test_derive_then_apply_reconstructs(source, target):
    assert apply_tags(derive_tags(source, target)) == target


@given(tokens, tokens)
def test_alignment_cost_is_symmetric(a, b):
    cost = alignment_cost(align(a, b))
    assert cost == alignment_cost(align(b, a))
    assert cost == edit_distance(a, b)


def test_leading_insert_needs_start():
    sentence = derive_tags(["b"], ["a", "b"])
    assert sentence.tags[0] == (EditTag.append("a"),)
    with pytest.raises(LeadingInsertUnsupported):
        derive_tags(["b"], ["a", "b"], with_start=False)


def test_dangling_merge():
    sentence = TaggedSentence(tokens=("a",), tags=((EditTag.merge_hyphen(),),))
    with pytest.raises(DanglingMerge):
        apply_tags(sentence)


def test_conflicts_drop_keep():
    resolved = resolve_conflicts([EditTag.keep(), EditTag.append("x"), EditTag.replace("y")])
    assert resolved == (EditTag.replace("y"), EditTag.append("x"))
    assert resolve_conflicts([]) == (EditTag.keep(),)


def test_tag_payload_validation():
    with pytest.raises(ValueError):
        EditTag(kind=EditTagKind.REPLACE)
    with pytest.raises(ValueError):
        EditTag(kind=EditTagKind.KEEP, token="x")


def test_gold_predictor_converges_in_one_pass():
    result = iterate(SOURCE, GoldTagPredictor(TARGET))
    assert result.tokens == TARGET
    assert result.iterations == 1
    assert result.converged


def test_keep_predictor_leaves_input():
    result = iterate(["a", "b"], lambda toks: [[EditTag.keep()] for _ in toks])
    assert result.tokens == ["a", "b"]
    assert result.iterations == 1
    assert result.converged


def _one_fix_per_pass(fixes):
    def predictor(toks):
        tags = [[EditTag.keep()] for _ in toks]
        for i, tok in enumerate(toks):
            if tok in fixes:
                tags[i] = [EditTag.replace(fixes[tok])]
                break
        return tags
    return predictor


def test_staged_predictor_converges():
    result = iterate(["x", "y", "z"], _one_fix_per_pass({"x": "a", "y": "b", "z": "c"}))
    assert result.tokens == ["a", "b", "c"]
    assert result.iterations <= 3
    assert result.converged


def test_oscillation_is_reported():
    result = iterate(["a"], _one_fix_per_pass({"a": "b", "b": "a"}), max_iters=3)
    assert not result.converged
    assert result.iterations == 3


def test_max_iters_must_be_positive():
    with pytest.raises(ValueError):
        iterate(["a"], GoldTagPredictor(["a"]), max_iters=0)


def test_unigram_predictor():
    predictor = UnigramTagPredictor().fit([
        (["go", "home"], ["goes", "home"]),
        (["go", "out"], ["goes", "out"]),
    ])
    assert iterate(["go", "home"], predictor).tokens == ["goes", "home"]


def test_tag_file_round_trip(tmp_path):
    sentences = [
        derive_tags(SOURCE, TARGET),
        TaggedSentence(tokens=(START_TOKEN, "a"), tags=((EditTag.keep(),), (EditTag.replace("x;y\\z"),))),
    ]
    path = tmp_path / "tags.tsv"
    path.write_text(write_tagged(sentences), encoding="utf-8")
    assert read_tagged(path) == sentences


def test_unknown_tag():
    with pytest.raises(TagFormatError):
        parse_tags("KEEP;SHOUT")


def test_bad_tag_line_reports_line_number(tmp_path):
    path = tmp_path / "tags.tsv"
    path.write_text("a\tKEEP\nb KEEP\n", encoding="utf-8")
    with pytest.raises(TagFormatError, match=":2:"):
        read_tagged(path)
