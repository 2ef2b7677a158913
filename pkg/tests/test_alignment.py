import pytest

from phantom_probe.alignment import (
    Outcome,
    Trial,
    align,
    classify_trial,
    compare_document,
    extended_start,
    extract_token_span,
)
from phantom_probe.probe import AnnotatedDoc, Target, bracket
from phantom_probe.vocab import encode, decode


def make_doc(text, *words):
    data = text.encode()
    targets, pos = [], 0
    for w in words:
        s = data.index(w.encode(), pos)
        targets.append(Target(s, s + len(w.encode()), w))
        pos = s + 1
    return AnnotatedDoc("d", text, targets, bracket(text, targets), "")


TEXT = "They met in February and again on Saturday after the election."


def test_extended_start():
    data = b"a  \n b"
    assert extended_start(data, 5) == 1
    assert extended_start(data, 0) == 0


def test_extract_span_includes_gap(toy):
    data = TEXT.encode()
    enc = encode(toy, data)
    s = data.index(b"February")
    ids = extract_token_span(toy, enc, (s, s + 8), data)
    assert [toy.surface(i) for i in ids] == [b" February"]
    with pytest.raises(ValueError):
        extract_token_span(toy, enc, (0, 10_000), data)


def test_identity_output_is_unchanged(toy):
    doc = make_doc(TEXT, "February", "Saturday", "election")
    trials = compare_document(toy, doc, TEXT)
    assert [t.outcome for t in trials] == [Outcome.UNCHANGED] * 3


def test_replacement_and_phantom(toy):
    doc = make_doc(TEXT, "February", "Saturday")
    out = "They met in March and again on Saturday after the election."
    ids = list(encode(toy, out).ids)
    k = ids.index(toy.id_of(" Saturday"))
    ids[k : k + 1] = [toy.id_of(" "), toy.id_of(" Saturday")]
    out_text = out.replace(" Saturday", "  Saturday")
    trials = compare_document(toy, doc, out_text, ids)
    assert trials[0].outcome is Outcome.REPLACED and trials[0].output_surface == "March"
    assert trials[1].outcome is Outcome.DIFFERENT
    assert [toy.surface(i) for i in trials[1].output_ids] == [b" ", b" Saturday"]


def test_gapless_phantom_via_ids(toy):
    doc = make_doc(TEXT, "February")
    ids = list(encode(toy, TEXT).ids)
    k = ids.index(toy.id_of(" February"))
    ids[k] = toy.id_of("February")
    (t,) = compare_document(toy, doc, TEXT, ids)
    assert t.outcome is Outcome.DIFFERENT and t.output_ids == (toy.id_of("February"),)


def test_text_only_output_is_reencoded(toy):
    doc = make_doc(TEXT, "February")
    (t,) = compare_document(toy, doc, TEXT.replace(" February", "\nFebruary"))
    assert t.outcome is Outcome.DIFFERENT
    assert [toy.surface(i) for i in t.output_ids] == [b"\n", b"February"]


def test_missing_anchor_discards_locally(toy):
    doc = make_doc(TEXT, "February", "election")
    out = "They met in February and again on Saturday after the vote."
    trials = compare_document(toy, doc, out)
    assert trials[0].outcome is Outcome.UNCHANGED
    assert trials[1].outcome is Outcome.REPLACED and trials[1].output_surface == "vote"
    # losing the anchor next to a target only discards that target
    trials = compare_document(toy, doc, "They met in February and again on Saturday after a vote.")
    assert [t.outcome for t in trials] == [Outcome.UNCHANGED, Outcome.DISCARDED]
    out2 = "They met in February and again on Sunday after the election."
    trials = compare_document(toy, doc, out2)
    assert trials[0].outcome is Outcome.UNCHANGED and trials[1].outcome is Outcome.UNCHANGED
    out3 = "Completely different text."
    assert {t.outcome for t in compare_document(toy, doc, out3)} == {Outcome.DISCARDED}


def test_glued_punctuation_must_survive(toy):
    text = "He said (February) was cold."
    doc = make_doc(text, "February")
    assert compare_document(toy, doc, "He said (March) was cold.")[0].outcome is Outcome.REPLACED
    assert compare_document(toy, doc, "He said March was cold.")[0].outcome is Outcome.DISCARDED


def test_adjacent_targets_and_repeated_words(toy):
    text = "We saw Guy Paris Paris Thursday"
    doc = make_doc(text, "Guy", "Paris")
    trials = compare_document(toy, doc, "We saw Tom Berlin Paris Thursday")
    assert [t.output_surface for t in trials] == ["Tom", "Berlin"]
    text2 = "the economy economy children grew"
    doc2 = AnnotatedDoc("d", text2, [Target(12, 19, "economy"), Target(20, 28, "children")], "", "")
    trials = compare_document(toy, doc2, "the economy market kids grew")
    assert [(t.outcome, t.output_surface) for t in trials] == [(Outcome.REPLACED, "market"), (Outcome.REPLACED, "kids")]


def test_brackets_in_output_drop_ids(toy, caplog):
    doc = make_doc(TEXT, "February")
    ids = list(encode(toy, TEXT).ids)
    (t,) = compare_document(toy, doc, TEXT.replace("February", "[February]"), ids)
    assert t.brackets_present and t.outcome is Outcome.UNCHANGED
    assert "brackets" in caplog.text


def test_ids_not_matching_text_discard_document(toy):
    doc = make_doc(TEXT, "February")
    (t,) = compare_document(toy, doc, TEXT, [toy.id_of("Guy")])
    assert t.outcome is Outcome.DISCARDED


def test_classify_trial_rules(toy):
    a = (toy.id_of(" Guy"),)
    assert classify_trial(toy, "Guy", None, a, ()) is Outcome.DISCARDED
    assert classify_trial(toy, "Guy", "Tom", a, a) is Outcome.REPLACED
    assert classify_trial(toy, "Guy", "Guy", a, a) is Outcome.UNCHANGED
    assert classify_trial(toy, "Guy", "Guy", a, (toy.id_of("Guy"),)) is Outcome.DIFFERENT


def test_trial_record_round_trip():
    t = Trial("d", 0, "Guy", "Guy", (1, 2), (3,), Outcome.DIFFERENT, "E2_WhitespaceDetachReattach", 2)
    assert Trial.from_record(t.to_record()) == t


def test_align_returns_spans(toy):
    doc = make_doc(TEXT, "February")
    (a,) = align(doc, TEXT)
    assert TEXT.encode()[slice(*a.word_range)] == b"February"
