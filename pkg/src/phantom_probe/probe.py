"""Target selection, bracketing, and prompt assembly."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

DOC_PLACEHOLDER = "{doc}"
DEFAULT_FRACTION = 0.05
DEFAULT_MIN_WORDS = 100
DEFAULT_MAX_WORDS = 600
MATRIX_LENGTH_RANGE = (3, 15)

_WORD = re.compile(rb"\S+")
# ASCII punctuation plus common typographic quotes/dashes.
_PUNCT = set(b"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")
_UNICODE_PUNCT = ("‘", "’", "“", "”", "–", "—", "…")


def _data_file(name: str) -> str:
    return resources.files("phantom_probe").joinpath("data", name).read_text(encoding="utf-8")


def default_stopwords() -> frozenset[str]:
    return frozenset(_data_file("stopwords.txt").split())


def load_stopwords(path: str | Path) -> frozenset[str]:
    return frozenset(w.lower() for w in Path(path).read_text(encoding="utf-8").split())


def default_template() -> str:
    return _data_file("prompt_template.txt")


@dataclass(frozen=True)
class Target:
    start: int
    end: int
    word: str


@dataclass
class AnnotatedDoc:
    doc_id: str
    original_text: str
    targets: list[Target] = field(default_factory=list)
    bracketed_text: str = ""
    prompt: str = ""

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "original_text": self.original_text,
            "targets": [[t.start, t.end, t.word] for t in self.targets],
            "bracketed_text": self.bracketed_text,
            "prompt": self.prompt,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "AnnotatedDoc":
        return cls(
            doc_id=rec["doc_id"],
            original_text=rec["original_text"],
            targets=[Target(int(s), int(e), str(w)) for s, e, w in rec["targets"]],
            bracketed_text=rec["bracketed_text"],
            prompt=rec["prompt"],
        )


def _strip_punct(data: bytes, start: int, end: int) -> tuple[int, int]:
    def is_punct_at(pos: int, forward: bool) -> int:
        # returns byte length of a punctuation char at pos (0 if none)
        if forward:
            if data[pos] in _PUNCT:
                return 1
            for ch in _UNICODE_PUNCT:
                enc = ch.encode("utf-8")
                if data.startswith(enc, pos):
                    return len(enc)
        else:
            if data[pos - 1] in _PUNCT:
                return 1
            for ch in _UNICODE_PUNCT:
                enc = ch.encode("utf-8")
                if data[:pos].endswith(enc):
                    return len(enc)
        return 0

    while start < end and (n := is_punct_at(start, True)):
        start += n
    while end > start and (n := is_punct_at(end, False)):
        end -= n
    return start, end


def candidate_words(text: str) -> list[Target]:
    """Whitespace-delimited words with surrounding punctuation trimmed."""
    data = text.encode("utf-8")
    out = []
    for m in _WORD.finditer(data):
        s, e = _strip_punct(data, m.start(), m.end())
        if s < e:
            out.append(Target(s, e, data[s:e].decode("utf-8")))
    return out


def eligible_words(
    text: str,
    stopwords: frozenset[str] | None = None,
    length_range: tuple[int, int] | None = None,
) -> list[Target]:
    stop = default_stopwords() if stopwords is None else stopwords
    out = []
    for t in candidate_words(text):
        if t.word.lower() in stop:
            continue
        if not any(ch.isalnum() for ch in t.word):
            continue
        if length_range is not None and not length_range[0] <= len(t.word) <= length_range[1]:
            continue
        out.append(t)
    return out


def n_selected(fraction: float, n_eligible: int) -> int:
    # round first so 0.05 * 60 does not become 4 through float noise
    return min(n_eligible, math.ceil(round(fraction * n_eligible, 9)))


def select_targets(
    text: str,
    fraction: float = DEFAULT_FRACTION,
    stopwords: frozenset[str] | None = None,
    length_range: tuple[int, int] | None = None,
    seed: int = 0,
) -> list[Target]:
    """Uniformly sample ceil(fraction * eligible) eligible words without replacement."""
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    pool = eligible_words(text, stopwords, length_range)
    if not pool:
        raise ValueError("no eligible words")
    k = n_selected(fraction, len(pool))
    picked = random.Random(seed).sample(range(len(pool)), k)
    return [pool[i] for i in sorted(picked)]


def bracket(text: str, targets: Iterable[Target]) -> str:
    data = text.encode("utf-8")
    out = bytearray()
    pos = 0
    for t in targets:
        out += data[pos : t.start] + b"[" + data[t.start : t.end] + b"]"
        pos = t.end
    out += data[pos:]
    return out.decode("utf-8")


def build_prompt(doc: AnnotatedDoc, template: str | None = None) -> str:
    template = default_template() if template is None else template
    if DOC_PLACEHOLDER not in template:
        raise ValueError(f"template lacks the {DOC_PLACEHOLDER} placeholder")
    return template.replace(DOC_PLACEHOLDER, doc.bracketed_text)


def annotate(
    doc_id: str,
    text: str,
    fraction: float = DEFAULT_FRACTION,
    stopwords: frozenset[str] | None = None,
    length_range: tuple[int, int] | None = None,
    seed: int = 0,
    template: str | None = None,
) -> AnnotatedDoc:
    targets = select_targets(text, fraction, stopwords, length_range, doc_seed(seed, doc_id))
    doc = AnnotatedDoc(doc_id, text, targets, bracket(text, targets))
    doc.prompt = build_prompt(doc, template)
    return doc


def doc_seed(seed: int, doc_id: str) -> int:
    """Per-document seed so documents can be processed independently."""
    return random.Random(f"{seed}:{doc_id}").getrandbits(63)


def word_count(text: str) -> int:
    return len(text.split())


def filter_corpus(
    docs: Iterable[dict], min_words: int = DEFAULT_MIN_WORDS, max_words: int = DEFAULT_MAX_WORDS
) -> Iterator[dict]:
    """Keep documents with min_words <= word count <= max_words."""
    for doc in docs:
        if min_words <= word_count(doc["text"]) <= max_words:
            yield doc


def strip_brackets(text: str) -> tuple[str, bool]:
    """Remove well-formed [..] pairs that do not nest; report whether any were found."""
    stripped, n = re.subn(r"\[([^\[\]]*)\]", r"\1", text)
    return stripped, n > 0
