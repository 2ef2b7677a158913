import random
from collections import Counter

import pytest

from phantom_probe.alignment import Outcome, compare_document
from phantom_probe.probe import annotate
from phantom_probe.simulator import (
    BehaviorMixture,
    QuotaSampler,
    TargetLabel,
    generate,
    generate_corpus,
    load_presets,
    phantom_inventory,
    preset,
    pseudo_word,
    synthetic_annotated,
    synthetic_corpus,
)
from phantom_probe.taxonomy import ErrorType, classify_error
from phantom_probe.vocab import decode, encode

TEXT = "Officials said on Saturday that the February report from the minister was unbelievable."


@pytest.fixture(scope="module")
def docs():
    return synthetic_annotated(40, seed=5)


def all_e1():
    return BehaviorMixture(0, 0, 1, {ErrorType.E1: 1.0})


def test_mixture_validation():
    with pytest.raises(ValueError):
        BehaviorMixture(0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        BehaviorMixture(1, 0, 0, {ErrorType.E1: 0.5})
    with pytest.raises(ValueError):
        BehaviorMixture(1, 0, 0, split_merge_profile={"same": 1.0, "sideways": 0.0})
    m = BehaviorMixture.from_record({"p_unchanged": 0, "p_replaced": 0, "p_phantom": 1, "phantom_profile": {"E3": 1}})
    assert m.phantom_profile[ErrorType.E3] == 1
    assert BehaviorMixture.from_record(m.to_record()) == m


def test_presets_load():
    assert {"copy", "balanced", "split_heavy", "one_to_one"} <= set(load_presets())
    with pytest.raises(KeyError):
        preset("nope")


def test_copy_mixture_is_identity(toy):
    doc = annotate("d", TEXT, fraction=1.0)
    out = generate(toy, doc, preset("copy"))
    assert out.output_text == TEXT
    assert out.output_ids == encode(toy, TEXT).ids
    assert {lab.behaviour for lab in out.labels} == {"unchanged"}


def test_all_e1_uses_bare_token(toy):
    doc = annotate("d", "It was cold in February again", fraction=1.0, stopwords=frozenset({"it", "was", "in", "again", "cold"}))
    (lab,) = generate(toy, doc, all_e1()).labels
    assert lab.planted_type is ErrorType.E1 and lab.output_ids == (toy.id_of("February"),)


def test_determinism(toy, docs):
    a = [o.output_record() for o in generate_corpus(toy, docs, preset("balanced"), seed=9, n_trials=200)]
    b = [o.output_record() for o in generate_corpus(toy, docs, preset("balanced"), seed=9, n_trials=200)]
    c = [o.output_record() for o in generate_corpus(toy, docs, preset("balanced"), seed=10, n_trials=200)]
    assert a == b and a != c


def test_exact_trial_count_and_exhaustion(toy, docs):
    outs = list(generate_corpus(toy, docs, preset("balanced"), n_trials=123))
    assert sum(len(o.labels) for o in outs) == 123
    assert len(outs[-1].doc.targets) == len(outs[-1].labels)
    assert list(generate_corpus(toy, docs, preset("balanced"), n_trials=0)) == []
    with pytest.raises(ValueError, match="exhausted"):
        list(generate_corpus(toy, docs[:1], preset("balanced"), n_trials=10_000))


def test_label_soundness(toy, docs):
    for o in generate_corpus(toy, docs, preset("balanced"), seed=2, n_trials=800):
        for lab in o.labels:
            if lab.behaviour == "phantom":
                assert decode(toy, lab.output_ids).strip() == lab.word.encode()
                assert lab.output_ids != lab.input_ids
            elif lab.behaviour == "replaced":
                assert lab.replacement != lab.word
            assert TargetLabel.from_record(lab.to_record()) == lab


def test_closure_small(toy, docs):
    for o in generate_corpus(toy, docs, preset("balanced"), seed=4, n_trials=800):
        for trial, lab in zip(compare_document(toy, o.doc, o.output_text, o.output_ids), o.labels):
            assert trial.outcome is lab.outcome
            if lab.behaviour == "phantom":
                assert classify_error(toy, trial.input_ids, trial.output_ids, trial.input_word) is lab.expected_type


def test_pseudo_word_fallback(toy):
    doc = annotate("d", TEXT, fraction=1.0)
    out = generate(toy, doc, BehaviorMixture(0, 1, 0), synonyms={})
    assert all(lab.pseudo_word and lab.replacement == pseudo_word(lab.word) for lab in out.labels)
    assert all(t.outcome is Outcome.REPLACED for t in compare_document(toy, doc, out.output_text, out.output_ids))


def test_inventory_claims(toy):
    feb = phantom_inventory(toy, "February", b" ", (toy.id_of(" February"),))
    by_ids = {c.ids: c for c in feb}
    assert by_ids[(toy.id_of("February"),)].claimants == {ErrorType.E1}
    assert by_ids[(toy.id_of(" "), toy.id_of(" February"))].claimants == {ErrorType.E2}
    repaid = phantom_inventory(toy, "repaid", b" ", (toy.id_of(" repaid"),))
    split = next(c for c in repaid if c.ids == (toy.id_of(" re"), toy.id_of("paid")))
    assert split.claimants == {ErrorType.E4, ErrorType.E6} and split.ambiguous
    assert split.expected_type is ErrorType.E6 and split.kind == "split"
    assert phantom_inventory(toy, "February", b"\n\n", (toy.id_of("\n"),)) == ()


AMBIGUOUS = [
    # word, output pieces, claimants, precedence winner
    ("repaid", [" re", "paid"], {ErrorType.E4, ErrorType.E6}, ErrorType.E6),
    ("HIV", [" H", "IV"], {ErrorType.E4, ErrorType.E7}, ErrorType.E7),
    ("rights", [" right", "s"], {ErrorType.E4, ErrorType.E8}, ErrorType.E8),
    ("Clements", ["C", "lements"], {ErrorType.E5, ErrorType.E8}, ErrorType.E8),
]


@pytest.mark.parametrize("word,pieces,claims,winner", AMBIGUOUS, ids=[a[0] for a in AMBIGUOUS])
def test_ambiguous_fixtures(toy, word, pieces, claims, winner):
    canonical = encode(toy, " " + word).ids
    inv = {c.ids: c for c in phantom_inventory(toy, word, b" ", canonical)}
    cand = inv[tuple(toy.id_of(p) for p in pieces)]
    assert cand.claimants == claims and cand.expected_type is winner
    assert classify_error(toy, canonical, cand.ids, word) is winner


def test_quota_sampler_tracks_shares_under_infeasibility():
    s = QuotaSampler({"a": 0.5, "b": 0.3, "c": 0.2}, random.Random(0))
    rng = random.Random(1)
    served = Counter()
    for _ in range(20_000):
        feasible = {"a", "b"} | ({"c"} if rng.random() < 0.3 else set())
        label = s.draw(feasible)
        if label:
            served[label] += 1
    total = sum(served.values())
    for k, share in {"a": 0.5, "b": 0.3, "c": 0.2}.items():
        assert abs(served[k] / total - share) < 0.01


def test_quota_sampler_nothing_feasible():
    assert QuotaSampler({"a": 1.0}, random.Random(0)).draw(set()) is None


def test_synthetic_corpus_bounds():
    docs = synthetic_corpus(20, seed=1)
    assert all(100 <= len(d["text"].split()) <= 600 for d in docs)
    assert docs == synthetic_corpus(20, seed=1)
