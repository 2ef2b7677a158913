from fractions import Fraction

import numpy as np
import pytest

from canonical import CASES, as_ids
from phantom_probe.alignment import Outcome, Trial
from phantom_probe.analytics import (
    TransitionMatrix,
    fragment_count,
    outcome_distribution,
    split_merge_summary,
    transition_matrix,
)


def trial(outcome, inp=(1,), out=(1,), word="w"):
    return Trial("d", 0, word, word, tuple(inp), tuple(out), outcome)


def test_distribution_excludes_discarded():
    d = outcome_distribution([trial(Outcome.UNCHANGED)] * 2 + [trial(Outcome.DIFFERENT), trial(Outcome.DISCARDED)])
    assert d.total == 3 and d.discarded == 1
    assert d.fraction(Outcome.UNCHANGED) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        d.fraction(Outcome.DISCARDED)
    assert outcome_distribution([]).fraction(Outcome.REPLACED) is None
    assert d.to_record()["counts"]["Discarded"] == 1


def test_fragment_count_ignores_gap_tokens(toy):
    reattach = as_ids(toy, [" ", " Saturday"])
    assert fragment_count(toy, reattach) == 1
    assert fragment_count(toy, reattach, count_gap_tokens=True) == 2


def test_canonical_examples_land_in_expected_cells(toy):
    trials = [trial(Outcome.DIFFERENT, as_ids(toy, i), as_ids(toy, o), w) for w, i, o, _ in CASES]
    m = transition_matrix(toy, trials)
    assert m.cell(1, 1) == 4  # February, Saturday, Guy, However
    assert m.cell(1, 2) == 4  # repaid, HIV, rights, smooth
    assert m.cell(1, 3) == 1 and m.cell(2, 3) == 2 and m.cell(2, 2) == 1
    s = split_merge_summary(m)
    assert s == (Fraction(5, 12), Fraction(7, 12), Fraction(0))


def test_overflow_bucket_keeps_exact_tallies():
    m = TransitionMatrix(bounds=2)
    m.add(5, 4, 10)
    m.add(3, 3, 6)
    assert m.cell(9, 9) == 2
    assert (m.same, m.split, m.merge) == (1, 0, 1)
    assert m.labels() == ["1", "2", "3+"]


def test_mean_length_and_csv():
    m = TransitionMatrix(bounds=2)
    m.add(1, 2, 4)
    m.add(1, 2, 6)
    assert m.mean_char_length()[0, 1] == 5
    assert np.isnan(m.mean_char_length()[0, 0])
    csv_text = m.to_csv()
    assert csv_text.splitlines()[1] == "1,0,2,0"
    assert "5.0000" in m.to_csv("mean")


def test_matrices_add():
    a, b = TransitionMatrix(), TransitionMatrix()
    a.add(1, 1, 3)
    b.add(1, 2, 3)
    c = a + b
    assert c.total == 2 and c.split == 1
    with pytest.raises(ValueError):
        a + TransitionMatrix(bounds=3)


def test_rejects_non_different(toy):
    with pytest.raises(ValueError):
        transition_matrix(toy, [trial(Outcome.UNCHANGED)])
    with pytest.raises(ValueError):
        split_merge_summary(TransitionMatrix())
    with pytest.raises(ValueError):
        TransitionMatrix().add(0, 1, 1)
