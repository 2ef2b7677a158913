import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_segmentations, frozen, toy_tokens
from phantom_probe.segmentation import (
    SegmentationLimitError,
    UnencodableError,
    count_segmentations,
    enumerate_segmentations,
    equivalent,
    plausible_filter,
)
from phantom_probe.simulator import default_lexicon
from phantom_probe.vocab import Vocabulary, decode

COUNTS = frozen("segmentation_counts.json")


def test_lexicon_is_large_enough():
    lex = default_lexicon()
    assert len(lex) >= 40
    for w in ["February", "Saturday", "Guy", "However", "unbelievable", "Jubilee", "Dormer",
              "repaid", "HIV", "rights", "smooth", "Clements"]:
        assert w in lex


@pytest.mark.parametrize("surface", sorted(COUNTS["plausible"]))
def test_plausible_class_matches_oracle(toy_raw, surface):
    keep = plausible_filter(toy_raw)
    expected = brute_segmentations(toy_tokens(), surface.encode(), plausible=True)
    assert len(expected) == COUNTS["plausible"][surface]
    cls = enumerate_segmentations(toy_raw, surface, token_filter=keep)
    assert cls.id_sequences() == expected
    assert count_segmentations(toy_raw, surface, keep) == len(expected)


@pytest.mark.parametrize("surface", sorted(COUNTS["unfiltered"]))
def test_unfiltered_class_matches_oracle(toy_raw, surface):
    cls = enumerate_segmentations(toy_raw, surface)
    assert len(cls) == COUNTS["unfiltered"][surface]
    assert cls.id_sequences() == brute_segmentations(toy_tokens(), surface.encode())
    assert cls.canonical in cls.members


def test_members_decode_to_surface(toy_raw):
    for m in enumerate_segmentations(toy_raw, " unbelievable", token_filter=plausible_filter(toy_raw)).members:
        assert decode(toy_raw, m.ids) == b" unbelievable"


def test_tiny_vocab_examples():
    v = Vocabulary((b"a", b"b", b"ab"), mode="metaspace")
    assert count_segmentations(v, "ab") == 2
    assert len(enumerate_segmentations(v, "ab")) == 2
    assert count_segmentations(v, "") == 1
    assert count_segmentations(v, "c") == 0
    with pytest.raises(UnencodableError):
        enumerate_segmentations(v, "c")
    with pytest.raises(ValueError):
        enumerate_segmentations(v, "")


def test_limit(toy_raw):
    with pytest.raises(SegmentationLimitError) as info:
        enumerate_segmentations(toy_raw, " unbelievable", limit=10)
    assert info.value.count == count_segmentations(toy_raw, " unbelievable")


def test_equivalent_examples(toy, toy_raw):
    a, b = [toy.id_of(" February")], [toy.id_of("February")]
    assert equivalent(toy, a, b)
    assert not equivalent(toy_raw, a, b)
    assert equivalent(toy_raw, a, a)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1208), max_size=4), st.lists(st.integers(0, 1208), max_size=4),
       st.lists(st.integers(0, 1208), max_size=4))
def test_equivalent_is_an_equivalence(toy, x, y, z):
    assert equivalent(toy, x, x)
    assert equivalent(toy, x, y) == equivalent(toy, y, x)
    if equivalent(toy, x, y) and equivalent(toy, y, z):
        assert equivalent(toy, x, z)
