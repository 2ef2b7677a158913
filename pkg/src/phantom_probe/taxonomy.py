"""Eight-way taxonomy of phantom edits.

Each predicate looks at the input and output extended-span token ids of a
Different trial. Several predicates can fire at once; the first one in
``PRECEDENCE`` wins, most specific first.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .vocab import WHITESPACE, Vocabulary


class ErrorType(str, enum.Enum):
    E1 = "E1_WhitespaceBoundaryShift"
    E2 = "E2_WhitespaceDetachReattach"
    E3 = "E3_NewlineSubstitution"
    E4 = "E4_IntraWordResegmentation"
    E5 = "E5_ProperNounSegmentation"
    E6 = "E6_MorphologicalSurfacing"
    E7 = "E7_AcronymSplit"
    E8 = "E8_PluralPossessiveTail"
    OTHER = "Other"

    @property
    def bit(self) -> int:
        return 0 if self is ErrorType.OTHER else 1 << (int(self.name[1]) - 1)


PHANTOM_TYPES = tuple(t for t in ErrorType if t is not ErrorType.OTHER)
PRECEDENCE = (
    ErrorType.E3,
    ErrorType.E2,
    ErrorType.E1,
    ErrorType.E7,
    ErrorType.E8,
    ErrorType.E5,
    ErrorType.E6,
    ErrorType.E4,
)
S_TAILS = (b"s", b"'s")


@dataclass(frozen=True)
class AffixLexicon:
    prefixes: frozenset[str]
    suffixes: frozenset[str]

    @classmethod
    def parse(cls, text: str) -> "AffixLexicon":
        pre, suf = set(), set()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.endswith("-"):
                pre.add(line[:-1].lower())
            elif line.startswith("-"):
                suf.add(line[1:].lower())
            else:
                raise ValueError(f"affix entry {line!r} must look like 'x-' or '-x'")
        return cls(frozenset(pre), frozenset(suf))

    @classmethod
    def load(cls, path: str | Path) -> "AffixLexicon":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def is_boundary(self, word: str, pos: int) -> bool:
        return word[:pos].lower() in self.prefixes or word[pos:].lower() in self.suffixes


def default_affixes() -> AffixLexicon:
    return AffixLexicon.parse(
        resources.files("phantom_probe").joinpath("data", "affixes.txt").read_text(encoding="utf-8")
    )


@dataclass(frozen=True)
class SpanView:
    """An extended span split into its whitespace gap and word pieces."""

    gap: bytes
    gap_tokens: int
    pieces: tuple[bytes, ...]  # word pieces, first one stripped of leading whitespace
    attached: tuple[bool, ...]  # piece carried leading whitespace in its token

    @classmethod
    def of(cls, vocab: Vocabulary, ids: Sequence[int]) -> "SpanView":
        surfaces = [vocab.surface(i) for i in ids]
        n_gap = 0
        while n_gap < len(surfaces) and not surfaces[n_gap].strip(WHITESPACE):
            n_gap += 1
        gap = b"".join(surfaces[:n_gap])
        pieces, attached = [], []
        for j, s in enumerate(surfaces[n_gap:]):
            stripped = s.lstrip(WHITESPACE) if j == 0 else s
            attached.append(len(stripped) != len(s))
            if j == 0:
                gap += s[: len(s) - len(stripped)]
            pieces.append(stripped)
        return cls(gap, n_gap, tuple(pieces), tuple(attached))

    @property
    def boundaries(self) -> frozenset[int]:
        out, pos = set(), 0
        for p in self.pieces[:-1]:
            pos += len(p)
            out.add(pos)
        return frozenset(out)

    def s_positions(self) -> frozenset[int]:
        out, pos = set(), 0
        for p in self.pieces:
            if p in S_TAILS:
                out.add(pos)
            pos += len(p)
        return frozenset(out)


def is_acronym(word: str) -> bool:
    letters = [c for c in word if c.isalpha()]
    return len(letters) >= 2 and all(c.isupper() for c in letters)


def is_capitalized(word: str) -> bool:
    first = next((c for c in word if c.isalpha()), "")
    return first.isupper() and not is_acronym(word)


def _all_caps_piece(p: bytes) -> bool:
    s = p.decode("utf-8", errors="replace")
    return bool(s) and s.isalpha() and s.isupper()


def fired_predicates(
    vocab: Vocabulary,
    input_ids: Sequence[int],
    output_ids: Sequence[int],
    word: str,
    affixes: AffixLexicon | None = None,
) -> dict[ErrorType, bool]:
    affixes = affixes or default_affixes()
    a = SpanView.of(vocab, input_ids)
    b = SpanView.of(vocab, output_ids)
    moved = a.boundaries != b.boundaries
    fired = dict.fromkeys(PHANTOM_TYPES, False)

    out_first = vocab.surface(output_ids[0]) if output_ids else b""
    fired[ErrorType.E3] = b"\n" in out_first and a.gap == b" "

    fired[ErrorType.E2] = (
        a.gap_tokens == 0
        and len(a.pieces) == 1
        and a.attached[0]
        and b.gap_tokens > 0
        and b"\n" not in b.gap
        and len(b.pieces) == 1
    )

    fired[ErrorType.E1] = (
        len(input_ids) == 1
        and len(output_ids) == 1
        and a.pieces == b.pieces
        and a.attached != b.attached
    )

    fired[ErrorType.E7] = (
        is_acronym(word) and moved and len(b.pieces) > 0 and all(_all_caps_piece(p) for p in b.pieces)
    )

    tail_merge = (
        len(a.pieces) >= 2
        and a.pieces[-1] in S_TAILS
        and b.pieces[-1] not in S_TAILS
        and b.pieces[-1].endswith(b"s")
        and len(b.pieces[-1]) > len(a.pieces[-1])
    )
    fired[ErrorType.E8] = bool(b.s_positions() - a.s_positions()) or tail_merge

    fired[ErrorType.E5] = is_capitalized(word) and moved

    new = b.boundaries - a.boundaries
    fired[ErrorType.E6] = bool(new) and all(affixes.is_boundary(word, pos) for pos in new)

    fired[ErrorType.E4] = len(a.pieces) == 1 and len(b.pieces) >= 2
    return fired


def bitmask(fired: dict[ErrorType, bool]) -> int:
    return sum(t.bit for t, on in fired.items() if on)


def classify_error(
    vocab: Vocabulary,
    input_ids: Sequence[int],
    output_ids: Sequence[int],
    word: str,
    affixes: AffixLexicon | None = None,
) -> ErrorType:
    fired = fired_predicates(vocab, input_ids, output_ids, word, affixes)
    return next((t for t in PRECEDENCE if fired[t]), ErrorType.OTHER)


def whitespace_variant(vocab: Vocabulary, output_ids: Sequence[int]) -> str:
    """Sub-label for whitespace detach/reattach outputs."""
    view = SpanView.of(vocab, output_ids)
    return "reattachment" if view.attached and view.attached[0] else "detachment"


def precedence_winner(types: Iterable[ErrorType]) -> ErrorType:
    pool = set(types)
    return next((t for t in PRECEDENCE if t in pool), ErrorType.OTHER)


def histogram(types: Iterable[ErrorType | str]) -> dict[str, int]:
    counts = Counter(ErrorType(t).value for t in types)
    return {t.value: counts.get(t.value, 0) for t in ErrorType}
