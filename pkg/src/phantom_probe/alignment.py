"""Anchor alignment of model outputs and Unchanged/Replaced/Different classification."""

from __future__ import annotations

import difflib
import enum
import logging
import re
from dataclasses import dataclass, field
from typing import Sequence

from .probe import AnnotatedDoc, strip_brackets
from .vocab import WHITESPACE, AlignmentError, Encoding, Vocabulary, align_ids, encode

log = logging.getLogger(__name__)

_WORD = re.compile(rb"\S+")


class Outcome(str, enum.Enum):
    UNCHANGED = "Unchanged"
    REPLACED = "Replaced"
    DIFFERENT = "Different"
    DISCARDED = "Discarded"


PAPER_CLASSES = (Outcome.UNCHANGED, Outcome.REPLACED, Outcome.DIFFERENT)


@dataclass(frozen=True)
class AlignedTarget:
    target_index: int
    # output byte range of the replacement word(s); None when discarded
    word_range: tuple[int, int] | None


@dataclass
class Trial:
    doc_id: str
    target_index: int
    input_word: str
    output_surface: str
    input_ids: tuple[int, ...]
    output_ids: tuple[int, ...]
    outcome: Outcome
    error_type: str | None = None
    fired: int | None = None
    brackets_present: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return f"{self.doc_id}#{self.target_index}"

    def to_record(self) -> dict:
        rec = {
            "doc_id": self.doc_id,
            "target_index": self.target_index,
            "input_word": self.input_word,
            "output_surface": self.output_surface,
            "input_ids": list(self.input_ids),
            "output_ids": list(self.output_ids),
            "outcome": self.outcome.value,
        }
        if self.error_type is not None:
            rec["error_type"] = self.error_type
            rec["fired"] = self.fired
        if self.brackets_present:
            rec["brackets_present"] = True
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Trial":
        return cls(
            doc_id=rec["doc_id"],
            target_index=int(rec["target_index"]),
            input_word=rec["input_word"],
            output_surface=rec["output_surface"],
            input_ids=tuple(int(i) for i in rec["input_ids"]),
            output_ids=tuple(int(i) for i in rec["output_ids"]),
            outcome=Outcome(rec["outcome"]),
            error_type=rec.get("error_type"),
            fired=rec.get("fired"),
            brackets_present=bool(rec.get("brackets_present", False)),
        )


def extended_start(data: bytes, word_start: int) -> int:
    """End of the previous non-whitespace byte: the inter-word gap belongs to the word."""
    pos = word_start
    while pos > 0 and data[pos - 1] in WHITESPACE:
        pos -= 1
    return pos


def token_range(encoding: Encoding, start: int, end: int) -> tuple[int, int]:
    """Index range of the minimal run of tokens covering bytes [start, end)."""
    if start == end:
        return (0, 0)
    first = last = None
    for i, (s, e) in enumerate(encoding.offsets):
        if e > start and s < end:
            if first is None:
                first = i
            last = i
        elif s >= end:
            break
    if first is None:
        raise ValueError(f"byte range [{start}, {end}) is not covered by the encoding")
    return first, last + 1


def extract_token_span(
    vocab: Vocabulary, encoding: Encoding, word_range: tuple[int, int], text: str | bytes
) -> tuple[int, ...]:
    """Token ids covering the extended span [end of previous word, end of word]."""
    data = text.encode("utf-8") if isinstance(text, str) else text
    start, end = word_range
    if not 0 <= start <= end <= len(data):
        raise ValueError(f"word range {word_range} outside text of {len(data)} bytes")
    lo, hi = token_range(encoding, extended_start(data, start), end)
    return tuple(encoding.ids[lo:hi])


def _words(data: bytes) -> list[tuple[int, int]]:
    return [m.span() for m in _WORD.finditer(data)]


def align(doc: AnnotatedDoc, output_text: str | bytes) -> list[AlignedTarget]:
    """Locate each target's replacement in ``output_text``.

    Non-target words act as anchors. Anchors are matched with a longest
    common subsequence, so damage in one place only discards the targets
    whose neighbouring anchors were lost.
    """
    src = doc.original_text.encode("utf-8")
    out = output_text.encode("utf-8") if isinstance(output_text, str) else output_text
    in_words = _words(src)
    out_words = _words(out)

    owner: dict[int, int] = {}  # input word index -> target index
    w = 0
    for k, t in enumerate(doc.targets):
        while w < len(in_words) and in_words[w][1] < t.end:
            w += 1
        if w == len(in_words) or not in_words[w][0] <= t.start:
            raise ValueError(f"target {k} of {doc.doc_id} does not sit inside a word")
        owner[w] = k

    anchor_words = [i for i in range(len(in_words)) if i not in owner]
    # Target words stay in the matched sequence so that a target repeating a
    # neighbouring anchor cannot steal that anchor's match; only anchor
    # matches are used as region boundaries.
    matcher = difflib.SequenceMatcher(
        None,
        [src[slice(*span)] for span in in_words],
        [out[slice(*span)] for span in out_words],
        autojunk=False,
    )
    by_word: dict[int, int] = {}
    for a, b, size in matcher.get_matching_blocks():
        for j in range(size):
            by_word[a + j] = b + j
    # An anchor left unmatched next to a same-text target run gets the match back.
    for wi in anchor_words:
        if wi in by_word:
            continue
        for step in (1, -1):
            j = wi + step
            while j in owner and j not in by_word:
                j += step
            if j in owner and src[slice(*in_words[j])] == src[slice(*in_words[wi])]:
                by_word[wi] = by_word.pop(j)
                break
    matched = {pos: by_word[wi] for pos, wi in enumerate(anchor_words) if wi in by_word}

    # group consecutive target words that share the same flanking anchors
    groups: list[tuple[int, int, list[int]]] = []
    anchor_pos = 0
    for wi in sorted(owner):
        while anchor_pos < len(anchor_words) and anchor_words[anchor_pos] < wi:
            anchor_pos += 1
        left, right = anchor_pos - 1, anchor_pos
        if groups and groups[-1][0] == left and groups[-1][1] == right:
            groups[-1][2].append(wi)
        else:
            groups.append((left, right, [wi]))

    result: dict[int, AlignedTarget] = {}
    for left, right, members in groups:
        m_left = -1 if left < 0 else matched.get(left)
        m_right = len(out_words) if right >= len(anchor_words) else matched.get(right)
        if m_left is None or m_right is None:
            for wi in members:
                result[owner[wi]] = AlignedTarget(owner[wi], None)
            continue
        region_words = out_words[m_left + 1 : m_right]
        region_end = out_words[m_right][0] if m_right < len(out_words) else len(out)
        if len(members) == 1:
            chunks = [region_words]
        elif len(region_words) == len(members):
            chunks = [[w] for w in region_words]
        else:
            for wi in members:
                result[owner[wi]] = AlignedTarget(owner[wi], None)
            continue
        for wi, chunk in zip(members, chunks):
            k = owner[wi]
            t = doc.targets[k]
            prefix = src[in_words[wi][0] : t.start]
            suffix = src[t.end : in_words[wi][1]]
            if not chunk:
                ok = not prefix and not suffix
                span = (region_end, region_end)
            else:
                cs, ce = chunk[0][0], chunk[-1][1]
                piece = out[cs:ce]
                ok = (
                    len(piece) >= len(prefix) + len(suffix)
                    and piece.startswith(prefix)
                    and piece.endswith(suffix)
                )
                span = (cs + len(prefix), ce - len(suffix))
            result[k] = AlignedTarget(k, span if ok else None)
    return [result[k] for k in range(len(doc.targets))]


def _squash(text: str) -> str:
    return "".join(text.split())


def classify_trial(
    vocab: Vocabulary,
    input_word: str,
    output_surface: str | None,
    input_ids: Sequence[int],
    output_ids: Sequence[int],
) -> Outcome:
    """Three-way outcome; ``output_surface`` None means alignment failed."""
    if output_surface is None:
        return Outcome.DISCARDED
    if _squash(output_surface) != _squash(input_word):
        return Outcome.REPLACED
    if tuple(input_ids) == tuple(output_ids):
        return Outcome.UNCHANGED
    return Outcome.DIFFERENT


def compare_document(
    vocab: Vocabulary,
    doc: AnnotatedDoc,
    output_text: str,
    output_ids: Sequence[int] | None = None,
) -> list[Trial]:
    """Align one output against its annotated input and classify every target."""
    src = doc.original_text.encode("utf-8")
    in_enc = encode(vocab, src)
    text, had_brackets = strip_brackets(output_text)
    if had_brackets and output_ids is not None:
        log.warning("%s: brackets in output; token ids dropped and re-derived from text", doc.doc_id)
        output_ids = None
    out = text.encode("utf-8")

    aligned: list[AlignedTarget | None]
    try:
        out_enc = encode(vocab, out) if output_ids is None else align_ids(vocab, list(output_ids), out)
        aligned = list(align(doc, out))
    except AlignmentError as exc:
        log.warning("%s: output ids do not match output text (%s); document discarded", doc.doc_id, exc)
        out_enc = None
        aligned = [None] * len(doc.targets)

    trials = []
    for k, t in enumerate(doc.targets):
        in_ids = extract_token_span(vocab, in_enc, (t.start, t.end), src)
        a = aligned[k]
        if out_enc is None or a is None or a.word_range is None:
            surface, out_ids = None, ()
        else:
            surface = out[a.word_range[0] : a.word_range[1]].decode("utf-8", errors="replace")
            out_ids = extract_token_span(vocab, out_enc, a.word_range, out)
        outcome = classify_trial(vocab, t.word, surface, in_ids, out_ids)
        trials.append(
            Trial(
                doc_id=doc.doc_id,
                target_index=k,
                input_word=t.word,
                output_surface="" if surface is None else surface,
                input_ids=in_ids,
                output_ids=tuple(out_ids),
                outcome=outcome,
                brackets_present=had_brackets,
            )
        )
    return trials
