"""Outcome distributions and fragmentation-transition matrices."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .alignment import PAPER_CLASSES, Outcome, Trial
from .taxonomy import SpanView
from .vocab import Vocabulary

DEFAULT_BOUNDS = 8


@dataclass
class OutcomeDistribution:
    counts: dict[Outcome, int]

    @property
    def total(self) -> int:
        """Trials in the three outcome classes; Discarded excluded."""
        return sum(self.counts[c] for c in PAPER_CLASSES)

    @property
    def discarded(self) -> int:
        return self.counts[Outcome.DISCARDED]

    def fraction(self, outcome: Outcome) -> float | None:
        if outcome is Outcome.DISCARDED:
            raise ValueError("Discarded trials are reported as a count, not a class fraction")
        return self.counts[outcome] / self.total if self.total else None

    @property
    def fractions(self) -> dict[Outcome, float | None]:
        return {c: self.fraction(c) for c in PAPER_CLASSES}

    def to_record(self) -> dict:
        return {
            "counts": {c.value: n for c, n in self.counts.items()},
            "fractions": {c.value: f for c, f in self.fractions.items()},
            "total": self.total,
            "discarded": self.discarded,
        }


def outcome_distribution(trials: Iterable[Trial]) -> OutcomeDistribution:
    counts = Counter(t.outcome for t in trials)
    return OutcomeDistribution({o: counts.get(o, 0) for o in Outcome})


def fragment_count(vocab: Vocabulary, ids, count_gap_tokens: bool = False) -> int:
    """Subtokens used for the word; pure-whitespace gap tokens only when asked."""
    view = SpanView.of(vocab, ids)
    return len(view.pieces) + (view.gap_tokens if count_gap_tokens else 0)


class SplitMergeSummary(NamedTuple):
    same: Fraction
    split: Fraction
    merge: Fraction


@dataclass
class TransitionMatrix:
    """Counts indexed by (input fragments, output fragments).

    Row/column ``k - 1`` holds fragment count ``k`` for ``k <= bounds``; the
    last row/column is the overflow bucket for counts above ``bounds``.
    Diagonal/above/below tallies are kept exactly, overflow included.
    """

    bounds: int = DEFAULT_BOUNDS
    counts: np.ndarray = field(default=None)  # type: ignore[assignment]
    char_length_sums: np.ndarray = field(default=None)  # type: ignore[assignment]
    same: int = 0
    split: int = 0
    merge: int = 0

    def __post_init__(self) -> None:
        shape = (self.bounds + 1, self.bounds + 1)
        if self.counts is None:
            self.counts = np.zeros(shape, dtype=np.int64)
        if self.char_length_sums is None:
            self.char_length_sums = np.zeros(shape, dtype=np.int64)

    def _index(self, n: int) -> int:
        if n < 1:
            raise ValueError("fragment counts start at 1")
        return min(n, self.bounds + 1) - 1

    def add(self, x: int, y: int, char_length: int) -> None:
        i, j = self._index(x), self._index(y)
        self.counts[i, j] += 1
        self.char_length_sums[i, j] += char_length
        if y == x:
            self.same += 1
        elif y > x:
            self.split += 1
        else:
            self.merge += 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def cell(self, x: int, y: int) -> int:
        return int(self.counts[self._index(x), self._index(y)])

    def mean_char_length(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.counts > 0, self.char_length_sums / np.maximum(self.counts, 1), np.nan)

    def __add__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        if other.bounds != self.bounds:
            raise ValueError("cannot merge matrices with different bounds")
        return TransitionMatrix(
            self.bounds,
            self.counts + other.counts,
            self.char_length_sums + other.char_length_sums,
            self.same + other.same,
            self.split + other.split,
            self.merge + other.merge,
        )

    def labels(self) -> list[str]:
        return [str(k) for k in range(1, self.bounds + 1)] + [f"{self.bounds + 1}+"]

    def to_csv(self, which: str = "counts", delimiter: str = ",") -> str:
        """Grid with input fragments down the rows, output fragments across."""
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(["input\\output"] + self.labels())
        grid = self.counts if which == "counts" else self.mean_char_length()
        for label, row in zip(self.labels(), grid):
            if which == "counts":
                w.writerow([label] + [int(v) for v in row])
            else:
                w.writerow([label] + ["" if np.isnan(v) else f"{v:.4f}" for v in row])
        return buf.getvalue()


def transition_matrix(
    vocab: Vocabulary,
    trials: Iterable[Trial],
    bounds: int = DEFAULT_BOUNDS,
    count_gap_tokens: bool = False,
) -> TransitionMatrix:
    m = TransitionMatrix(bounds)
    for t in trials:
        if t.outcome is not Outcome.DIFFERENT:
            raise ValueError(f"trial {t.key} is {t.outcome.value}, not Different")
        m.add(
            fragment_count(vocab, t.input_ids, count_gap_tokens),
            fragment_count(vocab, t.output_ids, count_gap_tokens),
            len(t.input_word),
        )
    return m


def split_merge_summary(matrix: TransitionMatrix) -> SplitMergeSummary:
    """Fractions of Different mass on, above, and below the diagonal (exact)."""
    total = matrix.same + matrix.split + matrix.merge
    if total == 0:
        raise ValueError("empty transition matrix")
    return SplitMergeSummary(
        Fraction(matrix.same, total), Fraction(matrix.split, total), Fraction(matrix.merge, total)
    )
