import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phantom_probe.probe import (
    AnnotatedDoc,
    annotate,
    bracket,
    build_prompt,
    candidate_words,
    default_stopwords,
    eligible_words,
    filter_corpus,
    n_selected,
    select_targets,
    strip_brackets,
)

TEXT = "The minister said, on Saturday, that “February” figures were (unbelievable) and NATO agreed."


def test_candidate_words_trim_punctuation():
    words = [t.word for t in candidate_words(TEXT)]
    assert words[:4] == ["The", "minister", "said", "on"]
    assert "February" in words and "unbelievable" in words and "agreed" in words


def test_offsets_point_at_words():
    data = TEXT.encode()
    for t in candidate_words(TEXT):
        assert data[t.start : t.end].decode() == t.word


def test_stopwords_and_length_range():
    words = [t.word for t in eligible_words(TEXT)]
    assert "The" not in words and "on" not in words and "that" not in words
    assert "NATO" in words
    short = [t.word for t in eligible_words(TEXT, length_range=(3, 8))]
    assert "unbelievable" not in short and "NATO" in short


def test_stopword_list_size():
    assert len(default_stopwords()) == 179


@pytest.mark.parametrize("fraction,n,expected", [(0.05, 60, 3), (0.05, 61, 4), (0.05, 1, 1), (1.0, 7, 7), (0.3, 10, 3)])
def test_selection_size(fraction, n, expected):
    assert n_selected(fraction, n) == expected


def test_selection_is_deterministic_and_sorted():
    a = select_targets(TEXT, 0.5, seed=3)
    assert a == select_targets(TEXT, 0.5, seed=3)
    assert [t.start for t in a] == sorted(t.start for t in a)
    assert len(select_targets(TEXT, 1.0)) == len(eligible_words(TEXT))


def test_selection_errors():
    with pytest.raises(ValueError):
        select_targets(TEXT, 0)
    with pytest.raises(ValueError, match="no eligible"):
        select_targets("the and of", 0.5)


def test_bracket_and_prompt():
    doc = annotate("d1", TEXT, fraction=1.0)
    assert doc.bracketed_text.count("[") == len(doc.targets)
    assert "[February]" in doc.bracketed_text and "“[February]”" in doc.bracketed_text
    assert doc.bracketed_text in doc.prompt
    assert strip_brackets(doc.bracketed_text) == (TEXT, True)
    with pytest.raises(ValueError):
        build_prompt(doc, "no placeholder")
    assert AnnotatedDoc.from_record(doc.to_record()) == doc


def test_corpus_bounds_are_inclusive():
    docs = [{"doc_id": str(n), "text": " ".join(["w"] * n)} for n in (99, 100, 600, 601)]
    assert [d["doc_id"] for d in filter_corpus(docs)] == ["100", "600"]


words = st.text(alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd")), min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(st.lists(words, min_size=1, max_size=40), st.integers(0, 10**6))
def test_bracketing_round_trips(ws, seed):
    text = " ".join(ws)
    try:
        targets = select_targets(text, 0.5, stopwords=frozenset(), seed=seed)
    except ValueError:
        return
    assert strip_brackets(bracket(text, targets))[0] == text
