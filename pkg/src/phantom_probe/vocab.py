"""Subword vocabularies: loading, encoding with byte offsets, and decoding.

Everything is defined over raw bytes. Byte-level vocabulary files store tokens
in the GPT-2 printable-unicode convention and are unmapped on load; metaspace
files store plain UTF-8 strings where ``METASPACE`` stands for a leading space.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

BYTE_LEVEL = "byte-level"
METASPACE_MODE = "metaspace"
MODES = (BYTE_LEVEL, METASPACE_MODE)

METASPACE = "▁"
_MARK = METASPACE.encode("utf-8")
WHITESPACE = b" \t\n\r\x0b\x0c"

# GPT-2 style pre-tokenization, applied only when merges are present.
_PRETOKENIZE = re.compile(
    rb"'(?:s|t|re|ve|m|ll|d)| ?[A-Za-z\x80-\xff]+| ?[0-9]+"
    rb"| ?[^\sA-Za-z0-9\x80-\xff]+|\s+(?!\S)|\s+"
)


class VocabularyError(ValueError):
    """Raised for malformed vocabulary files or contents."""


class EncodingError(ValueError):
    """Raised when text cannot be expressed in the vocabulary."""


class AlignmentError(ValueError):
    """Raised when token ids cannot be laid over a rendered text."""


@lru_cache(maxsize=None)
def bytes_to_unicode() -> dict[int, str]:
    """GPT-2 byte -> printable character table."""
    bs = (
        list(range(ord("!"), ord("~") + 1))
        + list(range(ord("\xa1"), ord("\xac") + 1))
        + list(range(ord("\xae"), ord("\xff") + 1))
    )
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    return dict(zip(bs, (chr(c) for c in cs)))


@lru_cache(maxsize=None)
def unicode_to_bytes() -> dict[str, int]:
    return {c: b for b, c in bytes_to_unicode().items()}


def token_to_printable(token: bytes) -> str:
    table = bytes_to_unicode()
    return "".join(table[b] for b in token)


def printable_to_token(text: str) -> bytes:
    table = unicode_to_bytes()
    try:
        return bytes(table[c] for c in text)
    except KeyError as exc:
        raise VocabularyError(f"character {exc.args[0]!r} is outside the byte-level alphabet") from None


def _as_bytes(text: str | bytes) -> bytes:
    return text.encode("utf-8") if isinstance(text, str) else bytes(text)


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token table. IDs are list positions."""

    tokens: tuple[bytes, ...]
    merges: tuple[tuple[bytes, bytes], ...] = ()
    mode: str = BYTE_LEVEL
    normalize_whitespace: bool = False
    _index: dict[bytes, int] = field(init=False, repr=False, compare=False)
    _trie: dict = field(init=False, repr=False, compare=False)
    _ranks: dict[tuple[bytes, bytes], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise VocabularyError(f"unknown mode {self.mode!r}")
        tokens = tuple(t.encode("utf-8") if isinstance(t, str) else bytes(t) for t in self.tokens)
        object.__setattr__(self, "tokens", tokens)
        index: dict[bytes, int] = {}
        for i, tok in enumerate(tokens):
            if not tok:
                raise VocabularyError(f"empty token string at id {i}")
            if tok in index:
                raise VocabularyError(f"duplicate token string {tok!r} (ids {index[tok]} and {i})")
            index[tok] = i
        if self.mode == BYTE_LEVEL:
            missing = [b for b in range(256) if bytes([b]) not in index]
            if missing:
                raise VocabularyError(f"missing byte fallback for {len(missing)} byte values")
        object.__setattr__(self, "_index", index)

        trie: dict = {}
        for i, tok in enumerate(tokens):
            node = trie
            for b in tok:
                node = node.setdefault(b, {})
            node[None] = i
        object.__setattr__(self, "_trie", trie)

        merges = tuple((bytes(a), bytes(b)) for a, b in self.merges)
        object.__setattr__(self, "merges", merges)
        ranks: dict[tuple[bytes, bytes], int] = {}
        for rank, pair in enumerate(merges):
            ranks.setdefault(pair, rank)
        object.__setattr__(self, "_ranks", ranks)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: object) -> bool:
        if isinstance(token, str):
            token = token.encode("utf-8")
        return token in self._index

    def id_of(self, token: str | bytes) -> int:
        """ID of a token given in surface form (a leading space, not the marker)."""
        raw = _as_bytes(token)
        if self.mode == METASPACE_MODE:
            raw = raw.replace(b" ", _MARK)
        try:
            return self._index[raw]
        except KeyError:
            raise KeyError(f"token {token!r} not in vocabulary") from None

    def get_id(self, token: str | bytes) -> int | None:
        try:
            return self.id_of(token)
        except KeyError:
            return None

    def surface(self, token_id: int) -> bytes:
        """Decoded bytes of one token, before any sequence-level normalization."""
        self._check_id(token_id)
        tok = self.tokens[token_id]
        if self.mode == METASPACE_MODE:
            return tok.replace(_MARK, b" ")
        return tok

    def is_single_byte(self, token_id: int) -> bool:
        return len(self.surface(token_id)) == 1

    def _check_id(self, token_id: int) -> None:
        if not isinstance(token_id, int) or not 0 <= token_id < len(self.tokens):
            raise IndexError(f"token id {token_id!r} out of range for vocabulary of size {len(self.tokens)}")

    def prefix_matches(self, data: bytes, start: int) -> list[tuple[int, int]]:
        """All (end, id) such that data[start:end] is a token, shortest first."""
        node = self._trie
        out = []
        for pos in range(start, len(data)):
            node = node.get(data[pos])
            if node is None:
                break
            if None in node:
                out.append((pos + 1, node[None]))
        return out

    def to_document(self) -> dict:
        if self.mode == BYTE_LEVEL:
            show = token_to_printable
        else:
            show = lambda t: t.decode("utf-8")  # noqa: E731
        doc = {
            "mode": self.mode,
            "normalize_whitespace": self.normalize_whitespace,
            "tokens": [show(t) for t in self.tokens],
        }
        if self.merges:
            doc["merges"] = [f"{show(a)} {show(b)}" for a, b in self.merges]
        return doc

    def with_options(self, *, normalize_whitespace: bool | None = None) -> "Vocabulary":
        return Vocabulary(
            self.tokens,
            self.merges,
            self.mode,
            self.normalize_whitespace if normalize_whitespace is None else normalize_whitespace,
        )


@dataclass(frozen=True)
class Encoding:
    ids: tuple[int, ...]
    offsets: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.ids)


def _default_normalize(mode: str) -> bool:
    return mode == METASPACE_MODE


def _parse_token(text: str, mode: str) -> bytes:
    if not isinstance(text, str):
        raise VocabularyError(f"token entries must be strings, got {type(text).__name__}")
    if mode == BYTE_LEVEL:
        return printable_to_token(text)
    return text.encode("utf-8")


def _parse_merges(lines: Iterable[str], mode: str) -> list[tuple[bytes, bytes]]:
    merges = []
    for n, line in enumerate(lines):
        parts = line.split(" ")
        if len(parts) != 2 or not all(parts):
            raise VocabularyError(f"merge {n}: expected 'left right', got {line!r}")
        merges.append((_parse_token(parts[0], mode), _parse_token(parts[1], mode)))
    return merges


def vocabulary_from_document(
    doc: dict, mode: str | None = None, normalize_whitespace: bool | None = None
) -> Vocabulary:
    if not isinstance(doc, dict) or not isinstance(doc.get("tokens"), list):
        raise VocabularyError("vocabulary document needs a 'tokens' array")
    mode = mode or doc.get("mode", BYTE_LEVEL)
    if mode not in MODES:
        raise VocabularyError(f"unknown mode {mode!r}")
    if normalize_whitespace is None:
        normalize_whitespace = doc.get("normalize_whitespace", _default_normalize(mode))
    tokens = [_parse_token(t, mode) for t in doc["tokens"]]
    merges = _parse_merges(doc.get("merges", []), mode)
    return Vocabulary(tuple(tokens), tuple(merges), mode, bool(normalize_whitespace))


def load_vocabulary(
    path: str | Path, mode: str | None = None, normalize_whitespace: bool | None = None
) -> Vocabulary:
    """Load a single-document vocabulary file.

    ``mode`` and ``normalize_whitespace`` override the values stored in the file.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise VocabularyError(f"{path}: not valid JSON ({exc})") from None
    return vocabulary_from_document(doc, mode, normalize_whitespace)


def load_vocab_merges(
    vocab_path: str | Path,
    merges_path: str | Path | None = None,
    mode: str = BYTE_LEVEL,
    normalize_whitespace: bool | None = None,
) -> Vocabulary:
    """Load the standard two-file layout: a token->id JSON map and a merges list."""
    table = json.loads(Path(vocab_path).read_text(encoding="utf-8"))
    if not isinstance(table, dict):
        raise VocabularyError(f"{vocab_path}: expected a token -> id object")
    ids = sorted(table.values())
    if ids != list(range(len(ids))):
        raise VocabularyError(f"{vocab_path}: ids must be dense 0..V-1")
    by_id = sorted(table.items(), key=lambda kv: kv[1])
    tokens = [_parse_token(t, mode) for t, _ in by_id]
    merges: list[tuple[bytes, bytes]] = []
    if merges_path is not None:
        lines = [
            ln.rstrip("\n")
            for ln in Path(merges_path).read_text(encoding="utf-8").splitlines()
            if ln.strip() and not ln.startswith("#version")
        ]
        merges = _parse_merges(lines, mode)
    if normalize_whitespace is None:
        normalize_whitespace = _default_normalize(mode)
    return Vocabulary(tuple(tokens), tuple(merges), mode, normalize_whitespace)


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    Path(path).write_text(json.dumps(vocab.to_document(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


# -- encoding -----------------------------------------------------------------


def _to_model_bytes(vocab: Vocabulary, data: bytes) -> tuple[bytes, list[int]]:
    """Rewrite source bytes into the vocabulary's alphabet.

    Returns the rewritten bytes and a map from rewritten positions (0..len)
    back to source positions.
    """
    if vocab.mode == BYTE_LEVEL:
        return data, list(range(len(data) + 1))
    if _MARK in data:
        raise EncodingError("text contains the metaspace marker")
    out = bytearray()
    src = []
    for i, b in enumerate(data):
        if b == 0x20:
            out += _MARK
            src += [i, i, i]
        else:
            out.append(b)
            src.append(i)
    src.append(len(data))
    return bytes(out), src


def _greedy(vocab: Vocabulary, data: bytes) -> list[tuple[int, int, int]]:
    pieces = []
    pos = 0
    while pos < len(data):
        matches = vocab.prefix_matches(data, pos)
        if not matches:
            raise EncodingError(f"no token matches at byte {pos}")
        end, tid = matches[-1]
        pieces.append((tid, pos, end))
        pos = end
    return pieces


def _bpe_word(vocab: Vocabulary, chunk: bytes) -> list[bytes]:
    parts = [chunk[i : i + 1] for i in range(len(chunk))]
    if vocab.mode == METASPACE_MODE:
        # keep multi-byte characters whole; BPE starts from characters
        parts = [c.encode("utf-8") for c in chunk.decode("utf-8")]
    ranks = vocab._ranks
    while len(parts) > 1:
        best = None
        for i in range(len(parts) - 1):
            r = ranks.get((parts[i], parts[i + 1]))
            if r is not None and (best is None or r < best[0]):
                best = (r, i)
        if best is None:
            break
        pair = (parts[best[1]], parts[best[1] + 1])
        merged = []
        i = 0
        while i < len(parts):
            if i < len(parts) - 1 and (parts[i], parts[i + 1]) == pair:
                merged.append(parts[i] + parts[i + 1])
                i += 2
            else:
                merged.append(parts[i])
                i += 1
        parts = merged
    return parts


def _bpe(vocab: Vocabulary, chunk: bytes) -> list[tuple[int, int, int]]:
    pieces = []
    pos = 0
    for part in _bpe_word(vocab, chunk):
        tid = vocab._index.get(part)
        if tid is None:
            # merges may stop short of a vocabulary entry; fall back to longest match
            pieces += [(t, pos + s, pos + e) for t, s, e in _greedy(vocab, part)]
        else:
            pieces.append((tid, pos, pos + len(part)))
        pos += len(part)
    return pieces


def encode(vocab: Vocabulary, text: str | bytes) -> Encoding:
    """Canonical encoding of ``text``.

    Merge-rank BPE when the vocabulary carries merges, greedy longest match
    from the left otherwise. Offsets are byte ranges into the UTF-8 source.
    """
    data = _as_bytes(text)
    if vocab.mode == METASPACE_MODE and _MARK in data:
        raise EncodingError("text contains the metaspace marker")
    if vocab.merges:
        pieces = []
        for m in _PRETOKENIZE.finditer(data):
            chunk, src = _to_model_bytes(vocab, m.group())
            pieces += [(t, m.start() + src[s], m.start() + src[e]) for t, s, e in _bpe(vocab, chunk)]
    else:
        model, src = _to_model_bytes(vocab, data)
        pieces = [(t, src[s], src[e]) for t, s, e in _greedy(vocab, model)]
    return Encoding(tuple(p[0] for p in pieces), tuple((p[1], p[2]) for p in pieces))


def decode(vocab: Vocabulary, ids: Sequence[int]) -> bytes:
    out = b"".join(vocab.surface(i) for i in ids)
    if vocab.normalize_whitespace and out.startswith(b" "):
        out = out[1:]
    return out


def decode_text(vocab: Vocabulary, ids: Sequence[int]) -> str:
    return decode(vocab, ids).decode("utf-8", errors="replace")


def align_ids(vocab: Vocabulary, ids: Sequence[int], text: str | bytes) -> Encoding:
    """Lay externally produced token ids over the text they were rendered into.

    Without whitespace normalization the ids must decode to ``text`` exactly.
    With it, a token lacking the single space present in the text absorbs
    that space (the detokenizer restored it), and a leading space at the
    very start of the text may be dropped.
    """
    data = _as_bytes(text)
    offsets = []
    pos = 0
    for tid in ids:
        tok = vocab.surface(tid)
        if data.startswith(tok, pos):
            end = pos + len(tok)
        elif (
            vocab.normalize_whitespace
            and tok[:1] not in (b" ", b"")
            and tok[:1] not in WHITESPACE
            and data[pos : pos + 1] == b" "
            and data.startswith(tok, pos + 1)
        ):
            end = pos + 1 + len(tok)
        elif vocab.normalize_whitespace and pos == 0 and tok.startswith(b" ") and data.startswith(tok[1:], 0):
            end = len(tok) - 1
        else:
            raise AlignmentError(f"token {tid} ({tok!r}) does not match text at byte {pos}")
        offsets.append((pos, end))
        pos = end
    if pos != len(data):
        raise AlignmentError(f"ids cover {pos} of {len(data)} bytes")
    return Encoding(tuple(ids), tuple(offsets))


def toy_vocabulary(normalize_whitespace: bool = True) -> Vocabulary:
    """The bundled byte-level toy vocabulary used by the simulator and tests."""
    from importlib import resources

    doc = json.loads(resources.files("phantom_probe").joinpath("data", "toyvoc.json").read_text(encoding="utf-8"))
    return vocabulary_from_document(doc, None, normalize_whitespace)
