"""Digraph unification tables, normalize and denormalize"""

import itertools
import json

import pytest
from hypothesis import given, strategies as st

from app.config import settings
from app.exceptions import ProfileError, TableConflict, UnknownPrivateChar
from app.services.normalizer import (
    build_table,
    compile_table,
    denormalize,
    digraph_count,
    joint_table,
    normalize,
)
from app.services.text_model import profile_from_dict

P0, P1, P2, P3 = "\ue000", "\ue001", "\ue002", "\ue003"


@pytest.fixture(scope="module")
def table(official):
    return compile_table(official)


def test_compile_assigns_ascending_code_points(table):
    assert table.forward == {"mb": P0, "nd": P1, "ng": P2, "ny": P3}
    assert table.origin_profile == "basaa-official"


def test_profile_without_digraphs_gives_empty_table(official):
    bare = official.model_copy(update={"digraphs": ()})
    table = compile_table(bare)
    assert len(table) == 0
    assert normalize("mba", table) == "mba"


def test_duplicate_source_conflicts():
    with pytest.raises(TableConflict):
        build_table([("mb", None), ("mb", None)])


def test_replacement_collision_conflicts():
    with pytest.raises(TableConflict):
        build_table([("mb", P0), ("nd", P0)])


def test_explicit_replacements_are_skipped_by_auto_assignment():
    table = build_table([("mb", P0), ("nd", None)])
    assert table.forward == {"mb": P0, "nd": P1}


def test_longest_entry_matches_first():
    table = build_table([("nd", None), ("ndw", None)])
    assert [e.source for e in table.entries] == ["ndw", "nd"]
    assert normalize("ndwa nda", table) == f"{P1}a {P0}a"


def test_examples(table):
    assert normalize("mba", table) == P0 + "a"
    assert len(normalize("mba", table)) == 2
    assert normalize("", table) == ""
    assert denormalize(P0 + "a", table) == "mba"
    assert denormalize("plain text", table) == "plain text"


def test_unknown_private_char(table):
    with pytest.raises(UnknownPrivateChar) as info:
        denormalize("a\ue0ffb", table)
    assert info.value.position == 1


def test_exhaustive_round_trip(table):
    failures = []
    for length in range(5):
        for chars in itertools.product("mbnda", repeat=length):
            text = "".join(chars)
            if denormalize(normalize(text, table), table) != text:
                failures.append(text)
    assert failures == []


basaa_like = st.text(alphabet="mbndgyaeiɛɔou '", max_size=40)


@given(basaa_like)
def test_round_trip(official, text):
    table = compile_table(official)
    assert denormalize(normalize(text, table), table) == text


@given(basaa_like)
def test_idempotent(official, text):
    table = compile_table(official)
    once = normalize(text, table)
    assert normalize(once, table) == once


@given(basaa_like)
def test_length_shrinks_by_digraph_count(official, text):
    table = compile_table(official)
    assert len(normalize(text, table)) == len(text) - digraph_count(text, table)


def test_joint_table_merges_profiles(catholic, official):
    table = joint_table(catholic, official)
    assert set(table.forward) == {"mb", "nd", "ng", "ny"}


def _official_doc():
    return json.loads((settings.profiles_dir / "basaa-official.json").read_text(encoding="utf-8"))


def test_single_code_point_entries():
    doc = _official_doc()
    doc["digraphs"] = [["mb"], ["j"]]
    table = compile_table(profile_from_dict(doc))
    assert table.forward == {"mb": P0, "j": P1}
    assert normalize("jamba", table) == P1 + "a" + P0 + "a"
    assert denormalize(normalize("jamba", table), table) == "jamba"


def test_empty_entry_is_rejected():
    doc = _official_doc()
    doc["digraphs"] = [[""]]
    with pytest.raises(ProfileError):
        profile_from_dict(doc)
