"""Equivalence classes of token sequences that detokenize to one surface string."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .vocab import EncodingError, Vocabulary, _as_bytes, _to_model_bytes, decode, encode

DEFAULT_LIMIT = 10_000

# Single-byte tokens a real subword vocabulary plausibly uses as word pieces:
# isolated capitals (initials, acronym parts) and the plural/possessive "s".
PLAUSIBLE_SINGLES = frozenset(b"ABCDEFGHIJKLMNOPQRSTUVWXYZs")

TokenFilter = Callable[[int], bool]


class SegmentationLimitError(RuntimeError):
    def __init__(self, surface: bytes, count: int, limit: int):
        super().__init__(f"{surface!r} has {count} segmentations, above the limit of {limit}")
        self.surface = surface
        self.count = count
        self.limit = limit


class UnencodableError(EncodingError):
    pass


@dataclass(frozen=True)
class Segmentation:
    ids: tuple[int, ...]
    surface: bytes


@dataclass(frozen=True)
class EquivalenceClass:
    surface: bytes
    members: frozenset[Segmentation]
    canonical: Segmentation

    def __len__(self) -> int:
        return len(self.members)

    def id_sequences(self) -> set[tuple[int, ...]]:
        return {m.ids for m in self.members}


def plausible_filter(vocab: Vocabulary, allowed_singles: Iterable[int] = PLAUSIBLE_SINGLES) -> TokenFilter:
    """Reject single-byte fallback tokens except the allowed ones."""
    allowed = frozenset(allowed_singles)

    def keep(token_id: int) -> bool:
        s = vocab.surface(token_id)
        return len(s) != 1 or s[0] in allowed

    return keep


def _edges(vocab: Vocabulary, data: bytes, keep: TokenFilter | None) -> list[list[tuple[int, int]]]:
    edges = []
    for i in range(len(data)):
        found = vocab.prefix_matches(data, i)
        if keep is not None:
            found = [(end, tid) for end, tid in found if keep(tid)]
        edges.append(found)
    return edges


def _model_surface(vocab: Vocabulary, surface: str | bytes) -> tuple[bytes, bytes]:
    raw = _as_bytes(surface)
    try:
        model, _ = _to_model_bytes(vocab, raw)
    except EncodingError as exc:
        raise UnencodableError(str(exc)) from None
    return raw, model


def _suffix_counts(edges: list[list[tuple[int, int]]], n: int) -> list[int]:
    ways = [0] * (n + 1)
    ways[n] = 1
    for i in range(n - 1, -1, -1):
        ways[i] = sum(ways[end] for end, _ in edges[i])
    return ways


def count_segmentations(
    vocab: Vocabulary, surface: str | bytes, token_filter: TokenFilter | None = None
) -> int:
    """Number of token sequences whose concatenation is ``surface``; 0 if none."""
    try:
        _, data = _model_surface(vocab, surface)
    except UnencodableError:
        return 0
    return _suffix_counts(_edges(vocab, data, token_filter), len(data))[0]


def enumerate_segmentations(
    vocab: Vocabulary,
    surface: str | bytes,
    limit: int = DEFAULT_LIMIT,
    token_filter: TokenFilter | None = None,
) -> EquivalenceClass:
    """Every segmentation of ``surface`` into vocabulary tokens.

    Members are exact concatenations; sequence-level whitespace normalization
    is not applied here. ``token_filter`` restricts the tokens allowed in
    members (see ``plausible_filter``). The canonical encoding is always
    reported, but is only guaranteed to be a member of an unfiltered class.
    """
    raw, data = _model_surface(vocab, surface)
    if not data:
        raise ValueError("surface must be non-empty")
    if limit < 1:
        raise ValueError("limit must be positive")
    edges = _edges(vocab, data, token_filter)
    ways = _suffix_counts(edges, len(data))
    if ways[0] == 0 and token_filter is None:
        raise UnencodableError(f"{raw!r} cannot be segmented into vocabulary tokens")
    if ways[0] > limit:
        raise SegmentationLimitError(raw, ways[0], limit)

    members = []
    path: list[int] = []

    def walk(i: int) -> None:
        if i == len(data):
            members.append(Segmentation(tuple(path), raw))
            return
        for end, tid in edges[i]:
            if ways[end]:
                path.append(tid)
                walk(end)
                path.pop()

    walk(0)
    try:
        canonical = Segmentation(encode(vocab, raw).ids, raw)
    except EncodingError as exc:
        raise UnencodableError(str(exc)) from None
    return EquivalenceClass(raw, frozenset(members), canonical)


def equivalent(vocab: Vocabulary, a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff both id sequences detokenize to the same bytes."""
    return decode(vocab, a) == decode(vocab, b)
