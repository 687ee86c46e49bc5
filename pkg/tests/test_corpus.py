import json

import pytest
from hypothesis import given, settings, strategies as st

from semsketch.corpus import (
    Context,
    ContextError,
    CorpusError,
    DependencyRecord,
    SemSketchError,
    SenseKey,
    format_record,
    head_lemma,
    ingest_contexts,
    ingest_corpus,
    load_mapping,
    parse_record,
    save_mapping,
    write_contexts,
    write_corpus,
)
from semsketch.synthetic import random_corpus

from .conftest import rec


def test_three_lines_in_order(tmp_path):
    path = tmp_path / "c.tsv"
    records = [rec("писать", "TO_WRITE", "Object", w, sid=str(i)) for i, w in enumerate(["письмо", "книга", "статья"])]
    write_corpus(records, path)
    assert ingest_corpus(path) == records


def test_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    assert ingest_corpus(path) == []


def test_short_line_names_line(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("# header\n1\tа\tB\tAgent\tx\n", encoding="utf-8")
    with pytest.raises(CorpusError, match=r"bad.tsv:2: expected 8 tab-separated fields, got 5"):
        ingest_corpus(path)


def test_unknown_flag_rejected(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("1\tа\tB\tAgent\tx\tx\tNOUN\tWEIRD\n", encoding="utf-8")
    with pytest.raises(CorpusError, match=":1:"):
        ingest_corpus(path)


def test_fixture_corpus(data_dir):
    records = ingest_corpus(data_dir / "small_corpus.tsv")
    assert len(records) == 3
    assert records[1].flags == {"PRONOUN"}
    assert records[2].sense == SenseKey("готовить", "TO_PREPARE")


def test_ingest_is_deterministic(data_dir):
    assert ingest_corpus(data_dir / "small_corpus.tsv") == ingest_corpus(data_dir / "small_corpus.tsv")


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=60))
@settings(max_examples=25, deadline=None)
def test_record_round_trip(seed, n):
    for r in random_corpus(seed, n):
        assert parse_record(format_record(r)) == r


def test_file_round_trip(tmp_path):
    records = random_corpus(5, 200)
    write_corpus(records, tmp_path / "a.tsv")
    again = ingest_corpus(tmp_path / "a.tsv")
    write_corpus(again, tmp_path / "b.tsv")
    assert again == records
    assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()


def test_sense_key_identity():
    assert SenseKey("собрать", "TO_GATHER") == SenseKey("собрать", "TO_GATHER")
    assert str(SenseKey("готовить", "TO_PREPARE_FOOD_SUBSTANCE")) == "готовить:TO_PREPARE_FOOD_SUBSTANCE"
    with pytest.raises(ValueError):
        SenseKey("", "X")


def test_role_and_lemma_validation():
    with pytest.raises(ValueError):
        rec("a", "B", "Purpose Goal", "x")
    with pytest.raises(ValueError):
        rec("a", "B", "Agent", "")


def test_head_lemma():
    assert head_lemma("на заря") == "заря"
    assert head_lemma("заря") == "заря"
    assert head_lemma("на заря", 0) == "на"


def test_table1_context(data_dir):
    (ctx,) = ingest_contexts(data_dir / "table1_context.jsonl")
    assert ctx.id == "dev.sent.rus.116"
    assert ctx.text[ctx.start : ctx.end] == "наполнились"
    assert (ctx.start, ctx.end) == (46, 57)


def test_empty_span_rejected():
    with pytest.raises(ContextError):
        Context("c1", "", 3, 3, "abcdef")


def test_span_mismatch_cites_id(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        json.dumps({"id": "bad.1", "target": "xyz", "start": 0, "end": 3, "context": "abc def", "target_lemma": "x"}) + "\n",
        encoding="utf-8",
    )
    with pytest.raises(CorpusError, match="bad.1"):
        ingest_contexts(path)


def test_duplicate_context_id(tmp_path):
    line = json.dumps({"id": "a", "target": "b", "start": 0, "end": 1, "context": "b c", "target_lemma": "b"})
    path = tmp_path / "c.jsonl"
    path.write_text(line + "\n" + line + "\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="duplicate context id a"):
        ingest_contexts(path)


def test_context_round_trip(tmp_path):
    ctxs = [
        Context("a", "ест", 4, 7, "кот ест рыбу", "есть", (("кот", "Agent"), ("рыба", "Object")), SenseKey("есть", "TO_EAT")),
        Context("b", "bb", 0, 2, "bb", "b"),
    ]
    write_contexts(ctxs, tmp_path / "c.jsonl")
    assert ingest_contexts(tmp_path / "c.jsonl") == ctxs
    write_contexts(ctxs, tmp_path / "d.jsonl", include_sense=False)
    assert "TO_EAT" not in (tmp_path / "d.jsonl").read_text(encoding="utf-8")


def test_tagged_and_masked():
    ctx = Context("a", "ест", 4, 7, "кот ест рыбу")
    assert ctx.tagged() == "кот <t>ест</t> рыбу"
    assert ctx.masked() == "кот [MASK] рыбу"


def test_mapping_round_trip_and_duplicates(tmp_path):
    save_mapping({"b": "s2", "a": "s1"}, tmp_path / "m.json")
    assert load_mapping(tmp_path / "m.json") == {"a": "s1", "b": "s2"}
    (tmp_path / "dup.json").write_text('{"a": "s1", "a": "s2"}', encoding="utf-8")
    with pytest.raises(SemSketchError, match="duplicate"):
        load_mapping(tmp_path / "dup.json")
