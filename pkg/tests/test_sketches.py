import json

import pytest
from hypothesis import given, settings, strategies as st

from semsketch.corpus import ALL_FLAGS, SenseKey
from semsketch.sketches import (
    BuildConfig,
    Filler,
    RoleSection,
    Sketch,
    SketchError,
    anonymize,
    build_all,
    build_sketch,
    dump_sketch,
    filter_records,
    read_secret,
    read_sketches,
    select_senses,
    write_secret,
    write_sketches,
)
from semsketch.synthetic import random_corpus

from .conftest import rec
from .oracles import brute_force_sketches

WRITE = SenseKey("писать", "TO_WRITE")


def as_plain(sketches):
    return {
        (s.sense.lexeme_group, s.sense.semantic_class): [
            (sec.role, sec.total_count, [(f.lemma, f.count) for f in sec.fillers]) for sec in s.sections
        ]
        for s in sketches
    }


def test_filter_removes_pronoun():
    r = rec("a", "B", "Agent", "он", flags={"PRONOUN"})
    keep = rec("a", "B", "Agent", "врач")
    assert filter_records([r, keep], BuildConfig()) == [keep]


def test_filter_identity_with_no_exclusions():
    records = [rec("a", "B", "Agent", "он", flags={"PRONOUN"}), rec("a", "B", "Agent", "x", flags={"MOVED"})]
    assert filter_records(records, BuildConfig(excluded_flags=frozenset())) == records


def _sense_records(group, cls, n):
    return [rec(group, cls, "Object", f"w{i % 7}") for i in range(n)]


def test_threshold_boundary():
    records = _sense_records("v", "A", 2000) + _sense_records("v", "B", 1999)
    assert select_senses(records, BuildConfig()) == {SenseKey("v", "A")}


def test_min_meanings():
    records = _sense_records("solo", "ONLY", 5000)
    assert select_senses(records, BuildConfig(min_meanings=2)) == set()
    assert select_senses(records, BuildConfig(min_meanings=1)) == {SenseKey("solo", "ONLY")}


def test_min_meanings_counted_before_threshold():
    # the rare second meaning keeps the group polysemous even though it is dropped
    records = _sense_records("v", "MAIN", 50) + _sense_records("v", "RARE", 2)
    assert select_senses(records, BuildConfig(dependency_threshold=10)) == {SenseKey("v", "MAIN")}


def test_build_sketch_hand_count():
    records = (
        [rec("писать", "TO_WRITE", "Object", "письмо")] * 3
        + [rec("писать", "TO_WRITE", "Object", "книга")]
        + [rec("писать", "TO_WRITE", "Time", "вчера")] * 2
    )
    sk = build_sketch(WRITE, records, BuildConfig())
    assert sk.id == "писать:TO_WRITE"
    assert sk.sections == (
        RoleSection("Object", 4, (Filler("письмо", 3), Filler("книга", 1))),
        RoleSection("Time", 2, (Filler("вчера", 2),)),
    )


def test_single_record():
    sk = build_sketch(WRITE, [rec("писать", "TO_WRITE", "Agent", "врач")], BuildConfig())
    assert sk.sections == (RoleSection("Agent", 1, (Filler("врач", 1),)),)


def test_tie_broken_by_lemma():
    records = [rec("писать", "TO_WRITE", "Object", w) for w in ["яблоко", "арбуз", "яблоко", "арбуз"]]
    sk = build_sketch(WRITE, records, BuildConfig())
    assert [f.lemma for f in sk.sections[0].fillers] == ["арбуз", "яблоко"]


def test_build_sketch_errors():
    with pytest.raises(SketchError):
        build_sketch(WRITE, [], BuildConfig())
    with pytest.raises(SketchError):
        build_sketch(WRITE, [rec("x", "Y", "Agent", "z")], BuildConfig())


def test_truncation_keeps_untruncated_totals():
    records = [rec("писать", "TO_WRITE", "Object", f"w{i}") for i in range(15) for _ in range(i + 1)]
    sk = build_sketch(WRITE, records, BuildConfig(max_fillers_per_role=3))
    (section,) = sk.sections
    assert section.total_count == sum(range(1, 16))
    assert [f.count for f in section.fillers] == [15, 14, 13]


def test_build_all_three_senses():
    records = []
    for group in ["a", "b", "c"]:
        records += _sense_records(group, "X", 12) + _sense_records(group, "Y", 3)
    sketches = build_all(records, BuildConfig(dependency_threshold=10))
    assert [s.id for s in sketches] == ["a:X", "b:X", "c:X"]
    assert as_plain(sketches) == brute_force_sketches(records, 10, 2, 8, 10, ALL_FLAGS)


def test_build_all_empty_cases():
    assert build_all([], BuildConfig()) == []
    assert build_all(_sense_records("a", "X", 5) + _sense_records("a", "Y", 5), BuildConfig()) == []


configs = st.builds(
    BuildConfig,
    dependency_threshold=st.integers(0, 60),
    min_meanings=st.integers(1, 3),
    max_roles=st.integers(1, 5),
    max_fillers_per_role=st.integers(1, 6),
    excluded_flags=st.frozensets(st.sampled_from(sorted(ALL_FLAGS))),
)


@given(seed=st.integers(0, 2**32), n=st.integers(0, 1000), config=configs)
@settings(max_examples=40, deadline=None)
def test_oracle_equivalence(seed, n, config):
    records = random_corpus(seed, n)
    got = as_plain(build_all(records, config))
    expected = brute_force_sketches(
        records,
        config.dependency_threshold,
        config.min_meanings,
        config.max_roles,
        config.max_fillers_per_role,
        config.excluded_flags,
    )
    assert got == expected


@given(seed=st.integers(0, 2**32), low=st.integers(0, 50), step=st.integers(0, 50))
@settings(max_examples=30, deadline=None)
def test_threshold_monotone(seed, low, step):
    records = random_corpus(seed, 400)
    lo = select_senses(records, BuildConfig(dependency_threshold=low))
    hi = select_senses(records, BuildConfig(dependency_threshold=low + step))
    assert hi <= lo


@given(seed=st.integers(0, 2**32), k=st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_truncation_soundness(seed, k):
    records = random_corpus(seed, 500)
    full = {s.id: s for s in build_all(records, BuildConfig(dependency_threshold=0, max_fillers_per_role=10**6))}
    for sk in build_all(records, BuildConfig(dependency_threshold=0, max_fillers_per_role=k)):
        for sec in sk.sections:
            (whole,) = [x for x in full[sk.id].sections if x.role == sec.role]
            kept = {f.lemma for f in sec.fillers}
            dropped = [f.count for f in whole.fillers if f.lemma not in kept]
            assert not dropped or min(f.count for f in sec.fillers) >= max(dropped)
            assert sec.total_count == whole.total_count


def test_serialization_deterministic(tmp_path):
    records = random_corpus(11, 800)
    config = BuildConfig(dependency_threshold=20)
    write_sketches(build_all(records, config), tmp_path / "a.jsonl")
    write_sketches(build_all(list(records), config), tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert read_sketches(tmp_path / "a.jsonl") == build_all(records, config)


def test_read_single_sketch_file(tmp_path):
    sk = build_sketch(WRITE, [rec("писать", "TO_WRITE", "Agent", "врач")], BuildConfig())
    (tmp_path / "one.json").write_text(json.dumps(sk.to_dict(), ensure_ascii=False, indent=2), encoding="utf-8")
    assert read_sketches(tmp_path / "one.json") == [sk]


def test_invariants_enforced():
    with pytest.raises(ValueError):
        RoleSection("Object", 3, (Filler("a", 1), Filler("b", 2)))
    with pytest.raises(ValueError):
        RoleSection("Object", 1, (Filler("a", 2),))
    with pytest.raises(ValueError):
        Sketch("x", None, ())
    sec = RoleSection("Object", 1, (Filler("a", 1),))
    with pytest.raises(ValueError):
        Sketch("x", None, (sec, sec))
    with pytest.raises(ValueError):
        Filler("a", 0)


def _two_sketches():
    records = _sense_records("готовить", "TO_COOK", 5) + _sense_records("писать", "TO_WRITE", 4)
    return build_all(records, BuildConfig(dependency_threshold=1, min_meanings=1))


def test_anonymize_deterministic():
    a, secret_a = anonymize(_two_sketches(), 42)
    b, secret_b = anonymize(_two_sketches(), 42)
    assert [s.id for s in a] == [s.id for s in b]
    assert secret_a == secret_b


def test_anonymize_round_trip():
    original = _two_sketches()
    anon, secret = anonymize(original, 42)
    by_sense = {s.sense: s for s in original}
    for sk in anon:
        assert sk.sense is None
        assert by_sense[secret[sk.id]].sections == sk.sections


def test_anonymized_ids_hide_lemmas(tmp_path):
    anon, secret = anonymize(_two_sketches(), 7)
    write_sketches(anon, tmp_path / "anon.jsonl")
    for line in (tmp_path / "anon.jsonl").read_text(encoding="utf-8").splitlines():
        doc = json.loads(line)
        assert "sense" not in doc
        for sense in secret.values():
            assert sense.lexeme_group not in doc["id"]
            assert sense.semantic_class not in line


def test_anonymize_rejects_anonymous():
    anon, _ = anonymize(_two_sketches(), 1)
    with pytest.raises(SketchError):
        anonymize(anon, 1)


def test_secret_round_trip(tmp_path):
    _, secret = anonymize(_two_sketches(), 3)
    write_secret(secret, tmp_path / "secret.json")
    assert read_secret(tmp_path / "secret.json") == secret


def test_dump_is_stable():
    sk = _two_sketches()[0]
    assert dump_sketch(sk) == dump_sketch(Sketch.from_dict(json.loads(dump_sketch(sk))))
