"""Seeded stand-in for a language model on the replacement probe.

Every target gets one of three behaviours (copy, genuine replacement, phantom
resegmentation) and a ground-truth label, so the whole analysis pipeline can
be checked against known answers.

Phantom outputs come from per-word inventories. Each inventory entry records
which perturbation constructions produce it ("claimants"); an entry claimed
by more than one construction is ambiguous, and the taxonomy is expected to
report the precedence winner for it.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .alignment import Outcome, extended_start, token_range
from .masking import Blocklist, DecodeFilter, apply_filter
from .probe import AnnotatedDoc, Target, annotate, bracket, default_stopwords
from .segmentation import SegmentationLimitError, enumerate_segmentations, plausible_filter
from .taxonomy import PHANTOM_TYPES, AffixLexicon, ErrorType, default_affixes, precedence_winner
from .vocab import WHITESPACE, Encoding, Vocabulary, decode, encode

KINDS = ("same", "split", "merge")
BEHAVIOURS = ("unchanged", "replaced", "phantom")
PLANTED_OUTCOME = {
    "unchanged": Outcome.UNCHANGED,
    "replaced": Outcome.REPLACED,
    "phantom": Outcome.DIFFERENT,
}
_END = -1
_TOL = 1e-9


def _short(t: ErrorType) -> str:
    return t.name


def _parse_type(key: str) -> ErrorType:
    if key in ErrorType.__members__:
        return ErrorType[key]
    return ErrorType(key)


@dataclass(frozen=True)
class BehaviorMixture:
    p_unchanged: float
    p_replaced: float
    p_phantom: float
    phantom_profile: Mapping[ErrorType, float] = field(
        default_factory=lambda: {t: 1 / len(PHANTOM_TYPES) for t in PHANTOM_TYPES}
    )
    split_merge_profile: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        probs = (self.p_unchanged, self.p_replaced, self.p_phantom)
        if any(p < 0 for p in probs) or abs(sum(probs) - 1) > _TOL:
            raise ValueError(f"behaviour probabilities must be non-negative and sum to 1, got {probs}")
        prof = {_parse_type(k) if isinstance(k, str) else k: float(v) for k, v in self.phantom_profile.items()}
        if ErrorType.OTHER in prof or any(v < 0 for v in prof.values()) or abs(sum(prof.values()) - 1) > _TOL:
            raise ValueError("phantom_profile must be non-negative weights over E1..E8 summing to 1")
        object.__setattr__(self, "phantom_profile", {t: prof.get(t, 0.0) for t in PHANTOM_TYPES})
        if self.split_merge_profile is not None:
            smp = {k: float(v) for k, v in self.split_merge_profile.items()}
            if set(smp) - set(KINDS) or any(v < 0 for v in smp.values()) or abs(sum(smp.values()) - 1) > _TOL:
                raise ValueError("split_merge_profile must be weights over same/split/merge summing to 1")
            object.__setattr__(self, "split_merge_profile", {k: smp.get(k, 0.0) for k in KINDS})

    def to_record(self) -> dict:
        rec = {
            "p_unchanged": self.p_unchanged,
            "p_replaced": self.p_replaced,
            "p_phantom": self.p_phantom,
            "phantom_profile": {_short(t): w for t, w in self.phantom_profile.items()},
        }
        if self.split_merge_profile is not None:
            rec["split_merge_profile"] = dict(self.split_merge_profile)
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "BehaviorMixture":
        kwargs = {k: rec[k] for k in ("p_unchanged", "p_replaced", "p_phantom")}
        if "phantom_profile" in rec:
            kwargs["phantom_profile"] = {_parse_type(k): v for k, v in rec["phantom_profile"].items()}
        if rec.get("split_merge_profile") is not None:
            kwargs["split_merge_profile"] = rec["split_merge_profile"]
        return cls(**kwargs)


def load_presets(path: str | Path | None = None) -> dict[str, dict]:
    if path is None:
        text = resources.files("phantom_probe").joinpath("data", "presets.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return {k: v for k, v in json.loads(text).items() if not k.startswith("_")}


def preset(name: str) -> BehaviorMixture:
    presets = load_presets()
    if name not in presets:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(presets))}")
    return BehaviorMixture.from_record(presets[name])


def default_synonyms() -> dict[str, list[str]]:
    text = resources.files("phantom_probe").joinpath("data", "synonyms.json").read_text(encoding="utf-8")
    return json.loads(text)


def default_lexicon() -> list[str]:
    return resources.files("phantom_probe").joinpath("data", "lexicon.txt").read_text(encoding="utf-8").split()


# -- phantom inventories ------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    ids: tuple[int, ...]
    claimants: frozenset[ErrorType]
    x: int
    y: int

    @property
    def kind(self) -> str:
        return "same" if self.y == self.x else ("split" if self.y > self.x else "merge")

    @property
    def expected_type(self) -> ErrorType:
        return precedence_winner(self.claimants)

    @property
    def ambiguous(self) -> bool:
        return len(self.claimants) > 1


def _pieces(vocab: Vocabulary, ids: Sequence[int]) -> tuple[int, list[bytes]]:
    """Number of leading whitespace-only tokens, and the word pieces after them."""
    surf = [vocab.surface(i) for i in ids]
    n = 0
    while n < len(surf) and surf[n].strip(WHITESPACE) == b"":
        n += 1
    rest = surf[n:]
    if rest:
        rest[0] = rest[0].lstrip(WHITESPACE)
    return n, rest


def _cuts(pieces: Sequence[bytes]) -> set[int]:
    cuts, pos = set(), 0
    for p in pieces[:-1]:
        pos += len(p)
        cuts.add(pos)
    return cuts


def _s_tails(pieces: Sequence[bytes]) -> set[int]:
    found, pos = set(), 0
    for p in pieces:
        if p == b"s" or p == b"'s":
            found.add(pos)
        pos += len(p)
    return found


def _claims(
    word: str, canon: list[bytes], alt: list[bytes], affixes: AffixLexicon
) -> set[ErrorType]:
    """Constructions among E4..E8 that yield ``alt`` from the canonical pieces."""
    claims = set()
    c_cuts, a_cuts = _cuts(canon), _cuts(alt)
    letters = [ch for ch in word if ch.isalpha()]
    acronym = len(letters) >= 2 and all(ch.isupper() for ch in letters)
    if len(canon) == 1 and len(alt) > 1:
        claims.add(ErrorType.E4)
    if letters and letters[0].isupper() and not acronym and a_cuts != c_cuts:
        claims.add(ErrorType.E5)
    fresh = a_cuts - c_cuts
    lowered = word.lower()
    if fresh and all(lowered[:c] in affixes.prefixes or lowered[c:] in affixes.suffixes for c in fresh):
        claims.add(ErrorType.E6)
    if acronym and a_cuts != c_cuts and all(p.isalpha() and p.isupper() for p in alt):
        claims.add(ErrorType.E7)
    merged_tail = (
        len(canon) > 1
        and canon[-1] in (b"s", b"'s")
        and alt[-1] not in (b"s", b"'s")
        and alt[-1].endswith(b"s")
        and len(alt[-1]) > len(canon[-1])
    )
    if _s_tails(alt) - _s_tails(canon) or merged_tail:
        claims.add(ErrorType.E8)
    return claims


@lru_cache(maxsize=4096)
def phantom_inventory(
    vocab: Vocabulary,
    word: str,
    gap: bytes,
    canonical: tuple[int, ...],
    affixes: AffixLexicon | None = None,
) -> tuple[Candidate, ...]:
    """Alternative extended-span id sequences that render the same word.

    Only gaps of a single space (or no gap) are supported; other gaps yield an
    empty inventory.
    """
    affixes = affixes or default_affixes()
    if gap not in (b" ", b""):
        return ()
    w = word.encode("utf-8")
    n_gap, canon = _pieces(vocab, canonical)
    if b"".join(canon) != w:
        return ()
    keep = plausible_filter(vocab)
    options: dict[tuple[int, ...], set[ErrorType]] = {}

    def add(ids: Sequence[int], claims: Iterable[ErrorType]) -> None:
        ids = tuple(ids)
        if ids != canonical:
            options.setdefault(ids, set()).update(claims)

    space, newline = vocab.get_id(b" "), vocab.get_id(b"\n")
    bare, spaced = vocab.get_id(w), vocab.get_id(b" " + w)

    if gap == b" " and spaced is not None and canonical == (spaced,):
        if bare is not None and vocab.normalize_whitespace:
            add((bare,), [ErrorType.E1])
        add((space, spaced), [ErrorType.E2])
        if bare is not None:
            add((space, bare), [ErrorType.E2])
            add((newline, bare), [ErrorType.E3])

    try:
        detached = [m.ids for m in enumerate_segmentations(vocab, w, token_filter=keep).members]
    except (SegmentationLimitError, ValueError):
        detached = []
    forms: list[tuple[int, ...]] = []
    if gap == b" ":
        try:
            attached = enumerate_segmentations(vocab, b" " + w, token_filter=keep).members
            forms += [m.ids for m in attached if vocab.surface(m.ids[0]).startswith(b" ")]
        except (SegmentationLimitError, ValueError):
            pass
        forms += [(space,) + d for d in detached]
        if vocab.normalize_whitespace:
            forms += detached
    else:
        forms += detached

    for ids in forms:
        alt = _pieces(vocab, ids)[1]
        claims = _claims(word, canon, alt, affixes)
        if claims:
            add(ids, claims)

    out = []
    for ids, claims in sorted(options.items()):
        out.append(Candidate(ids, frozenset(claims), len(canon), len(_pieces(vocab, ids)[1])))
    return tuple(out)


# -- sampling -----------------------------------------------------------------


class QuotaSampler:
    """Weighted label draws corrected toward the target shares.

    Each draw starts from a random label. If some feasible label is behind
    its quota by a full draw or more, the most under-served one is taken
    instead, so served frequencies track the weights even when some labels
    are feasible only for a minority of items. In strict mode an item whose
    feasible labels are all at or above quota gets no label at all.
    """

    def __init__(self, weights: Mapping, rng: random.Random, strict: bool = True):
        self.strict = strict
        self.labels = [k for k, w in weights.items() if w > 0]
        total = sum(weights[k] for k in self.labels)
        self.shares = {k: weights[k] / total for k in self.labels}
        self.rng = rng
        self.served = dict.fromkeys(self.labels, 0)
        self.n = 0

    def deficit(self, label) -> float:
        return self.shares[label] * (self.n + 1) - self.served[label]

    def draw(self, feasible: set):
        pool = [k for k in self.labels if k in feasible]
        if not pool:
            return None
        own = self.rng.choices(self.labels, [self.shares[k] for k in self.labels])[0]
        neediest = max(pool, key=self.deficit)
        if self.deficit(neediest) >= 1:
            own = neediest
        elif own not in feasible:
            if self.strict and self.deficit(neediest) <= 0:
                return None  # serving anything here would overshoot its share
            own = neediest
        self.served[own] += 1
        self.n += 1
        return own


@dataclass
class TargetLabel:
    doc_id: str
    target_index: int
    word: str
    behaviour: str
    input_ids: tuple[int, ...]
    output_ids: tuple[int, ...]
    planted_type: ErrorType | None = None
    claimants: frozenset[ErrorType] = frozenset()
    kind: str | None = None
    replacement: str | None = None
    pseudo_word: bool = False
    note: str | None = None

    @property
    def outcome(self) -> Outcome:
        return PLANTED_OUTCOME[self.behaviour]

    @property
    def expected_type(self) -> ErrorType | None:
        return precedence_winner(self.claimants) if self.behaviour == "phantom" else None

    @property
    def ambiguous(self) -> bool:
        return len(self.claimants) > 1

    def to_record(self) -> dict:
        rec = {
            "doc_id": self.doc_id,
            "target_index": self.target_index,
            "word": self.word,
            "behaviour": self.behaviour,
            "outcome": self.outcome.value,
            "input_ids": list(self.input_ids),
            "output_ids": list(self.output_ids),
        }
        if self.behaviour == "phantom":
            rec.update(
                planted_type=self.planted_type.value,
                expected_type=self.expected_type.value,
                claimants=sorted(t.value for t in self.claimants),
                ambiguous=self.ambiguous,
                kind=self.kind,
            )
        if self.replacement is not None:
            rec["replacement"] = self.replacement
            rec["pseudo_word"] = self.pseudo_word
        if self.note:
            rec["note"] = self.note
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "TargetLabel":
        return cls(
            doc_id=rec["doc_id"],
            target_index=int(rec["target_index"]),
            word=rec["word"],
            behaviour=rec["behaviour"],
            input_ids=tuple(rec["input_ids"]),
            output_ids=tuple(rec["output_ids"]),
            planted_type=ErrorType(rec["planted_type"]) if rec.get("planted_type") else None,
            claimants=frozenset(ErrorType(t) for t in rec.get("claimants", ())),
            kind=rec.get("kind"),
            replacement=rec.get("replacement"),
            pseudo_word=bool(rec.get("pseudo_word", False)),
            note=rec.get("note"),
        )


@dataclass
class LabeledOutput:
    doc: AnnotatedDoc
    output_text: str
    output_ids: tuple[int, ...]
    labels: list[TargetLabel]

    def output_record(self) -> dict:
        return {"doc_id": self.doc.doc_id, "output_text": self.output_text, "output_ids": list(self.output_ids)}


def pseudo_word(word: str) -> str:
    return "qz" + hashlib.sha1(word.encode("utf-8")).hexdigest()[:6]


class _Stratifier:
    """Chooses, per phantom target, which slice of its inventory to draw from."""

    def __init__(self, mixture: BehaviorMixture, rng: random.Random):
        self.mixture = mixture
        self.rng = rng
        if mixture.split_merge_profile is not None:
            self.primary = QuotaSampler(mixture.split_merge_profile, rng)
        else:
            self.primary = QuotaSampler(mixture.phantom_profile, rng)

    def choose(self, inventory: Sequence[Candidate]) -> tuple[ErrorType, str | None, list[Candidate]] | None:
        prof = self.mixture.phantom_profile
        if self.mixture.split_merge_profile is None:
            feasible = {t for c in inventory for t in c.claimants}
            etype = self.primary.draw(feasible)
            if etype is None:
                return None
            return etype, None, [c for c in inventory if etype in c.claimants]
        kinds = {c.kind for c in inventory}
        kind = self.primary.draw(kinds)
        if kind is None:
            return None
        pool = [c for c in inventory if c.kind == kind]
        types = sorted({t for c in pool for t in c.claimants}, key=lambda t: t.name)
        weighted = [(t, prof[t]) for t in types if prof[t] > 0] or [(t, 1.0) for t in types]
        etype = self.rng.choices([t for t, _ in weighted], [w for _, w in weighted])[0]
        return etype, kind, [c for c in pool if etype in c.claimants]


def _weighted_index(rng: random.Random, weights: Sequence[float]) -> int:
    return rng.choices(range(len(weights)), weights)[0]


def _decode_paths(
    paths: Sequence[tuple[tuple[int, ...], float]], filt: DecodeFilter | None, rng: random.Random
) -> int:
    """Token-by-token decode over a set of weighted paths; returns the chosen path index.

    At each step the next-token distribution aggregates the paths still
    consistent with the prefix whose remaining tokens are not blocked, and the
    decode filter removes blocked next tokens before sampling.
    """
    alive = list(range(len(paths)))
    step = 0
    while True:
        agg: dict[int, float] = {}
        for i in alive:
            ids, w = paths[i]
            if filt is not None and filt.blocklist.blocks(ids[step + 1 :]):
                continue
            tok = ids[step] if step < len(ids) else _END
            agg[tok] = agg.get(tok, 0.0) + w
        cands = list(agg.items())
        if filt is not None:
            cands = apply_filter(filt, cands)
        tok = cands[_weighted_index(rng, [w for _, w in cands])][0]
        if tok == _END:
            return next(i for i in alive if len(paths[i][0]) == step)
        alive = [i for i in alive if step < len(paths[i][0]) and paths[i][0][step] == tok]
        step += 1


def _exact_span(encoding: Encoding, start: int, end: int) -> tuple[int, int] | None:
    lo, hi = token_range(encoding, start, end)
    if hi > lo and encoding.offsets[lo][0] == start and encoding.offsets[hi - 1][1] == end:
        return lo, hi
    return None


def generate(
    vocab: Vocabulary,
    doc: AnnotatedDoc,
    mixture: BehaviorMixture,
    synonyms: Mapping[str, Sequence[str]] | None = None,
    seed: int = 0,
    blocklist: Blocklist | None = None,
    stratifier: _Stratifier | None = None,
    affixes: AffixLexicon | None = None,
) -> LabeledOutput:
    """Produce one labelled model output for an annotated document."""
    synonyms = default_synonyms() if synonyms is None else synonyms
    affixes = affixes or default_affixes()
    if stratifier is None:
        stratifier = _Stratifier(mixture, random.Random(f"{seed}:{doc.doc_id}:labels"))
    rng = random.Random(f"{seed}:{doc.doc_id}:decode")
    filt = DecodeFilter(blocklist) if blocklist is not None and len(blocklist) else None

    src = doc.original_text.encode("utf-8")
    enc = encode(vocab, src)
    out_text = bytearray()
    out_ids: list[int] = []
    text_pos = tok_pos = 0
    labels = []

    for k, t in enumerate(doc.targets):
        ext = extended_start(src, t.start)
        gap = src[ext : t.start]
        tiles = _exact_span(enc, ext, t.end)
        if tiles is None:
            lo, hi = token_range(enc, ext, t.end)
            labels.append(
                TargetLabel(doc.doc_id, k, t.word, "unchanged", enc.ids[lo:hi], enc.ids[lo:hi],
                            note="span does not tile token boundaries")
            )
            continue
        lo, hi = tiles
        canonical = tuple(enc.ids[lo:hi])

        paths: list[tuple[tuple[int, ...], float]] = []
        meta: list[tuple] = []
        inventory = phantom_inventory(vocab, t.word, gap, canonical, affixes)
        chosen = stratifier.choose(inventory) if mixture.p_phantom > 0 and inventory else None
        p_copy = mixture.p_unchanged + (mixture.p_phantom if chosen is None else 0.0)

        if mixture.p_replaced > 0:
            subs = [s for s in synonyms.get(t.word, ()) if s != t.word]
            is_pseudo = not subs
            subs = subs or [pseudo_word(t.word)]
            for s in subs:
                ids = encode(vocab, gap + s.encode("utf-8")).ids
                paths.append((ids, mixture.p_replaced / len(subs)))
                meta.append(("replaced", s, is_pseudo))
        if chosen is not None:
            etype, kind, pool = chosen
            for c in pool:
                paths.append((c.ids, mixture.p_phantom / len(pool)))
                meta.append(("phantom", c, etype))

        viable_edit = [i for i, (ids, _) in enumerate(paths) if filt is None or not filt.blocklist.blocks(ids)]
        copy_ok = filt is None or not filt.blocklist.blocks(canonical)
        groups = []
        if copy_ok and p_copy > 0:
            groups.append(("copy", p_copy))
        edit_mass = sum(paths[i][1] for i in viable_edit)
        if edit_mass > 0:
            groups.append(("edit", sum(w for _, w in paths)))
        note = None
        if not groups:
            groups, note = [("copy", 1.0)], "every path blocked; copied"
        group = groups[_weighted_index(rng, [w for _, w in groups])][0]

        if group == "copy":
            span_ids, rendered = canonical, src[ext : t.end]
            label = TargetLabel(doc.doc_id, k, t.word, "unchanged", canonical, canonical, note=note)
        else:
            pick = _decode_paths(paths, filt, rng)
            span_ids = paths[pick][0]
            info = meta[pick]
            if info[0] == "replaced":
                rendered = gap + info[1].encode("utf-8")
                label = TargetLabel(doc.doc_id, k, t.word, "replaced", canonical, span_ids,
                                    replacement=info[1], pseudo_word=info[2])
            else:
                cand, etype = info[1], info[2]
                raw = decode(vocab.with_options(normalize_whitespace=False), span_ids)
                rendered = raw if raw[:1] in (b" ", b"\n") else gap + raw
                label = TargetLabel(doc.doc_id, k, t.word, "phantom", canonical, span_ids,
                                    planted_type=etype, claimants=cand.claimants, kind=cand.kind)
        labels.append(label)
        out_text += src[text_pos:ext] + rendered
        out_ids += list(enc.ids[tok_pos:lo]) + list(span_ids)
        text_pos, tok_pos = t.end, hi

    out_text += src[text_pos:]
    out_ids += list(enc.ids[tok_pos:])
    return LabeledOutput(doc, out_text.decode("utf-8"), tuple(out_ids), labels)


def _trim(doc: AnnotatedDoc, n: int) -> AnnotatedDoc:
    targets = doc.targets[:n]
    bracketed = bracket(doc.original_text, targets)
    return replace(doc, targets=targets, bracketed_text=bracketed,
                   prompt=doc.prompt.replace(doc.bracketed_text, bracketed))


def generate_corpus(
    vocab: Vocabulary,
    docs: Iterable[AnnotatedDoc],
    mixture: BehaviorMixture,
    synonyms: Mapping[str, Sequence[str]] | None = None,
    seed: int = 0,
    n_trials: int = 10_000,
    blocklist: Blocklist | None = None,
) -> Iterator[LabeledOutput]:
    """Labelled outputs covering exactly ``n_trials`` targets.

    The last document is trimmed to the targets still needed. One sampler is
    shared across the corpus so profile draws that a document cannot take
    carry over to later documents.
    """
    synonyms = default_synonyms() if synonyms is None else synonyms
    stratifier = _Stratifier(mixture, random.Random(f"{seed}:labels"))
    remaining = n_trials
    for doc in docs:
        if remaining <= 0:
            return
        if not doc.targets:
            continue
        if len(doc.targets) > remaining:
            doc = _trim(doc, remaining)
        yield generate(vocab, doc, mixture, synonyms, seed, blocklist, stratifier)
        remaining -= len(doc.targets)
    if remaining > 0:
        raise ValueError(f"corpus exhausted with {remaining} of {n_trials} trials still needed")


def _target_spans(vocab: Vocabulary, doc: AnnotatedDoc) -> Iterator[tuple[Target, bytes, tuple[int, ...]]]:
    src = doc.original_text.encode("utf-8")
    enc = encode(vocab, src)
    for t in doc.targets:
        ext = extended_start(src, t.start)
        tiles = _exact_span(enc, ext, t.end)
        if tiles is not None:
            yield t, src[ext : t.start], tuple(enc.ids[tiles[0] : tiles[1]])


def inventory_coverage(
    vocab: Vocabulary, docs: Iterable[AnnotatedDoc], blocklist: Blocklist, affixes: AffixLexicon | None = None
) -> float:
    """Share of phantom inventory entries (over all targets) that the blocklist makes unreachable."""
    total = covered = 0
    for doc in docs:
        for t, gap, canonical in _target_spans(vocab, doc):
            for c in phantom_inventory(vocab, t.word, gap, canonical, affixes):
                total += 1
                covered += blocklist.blocks(c.ids)
    return covered / total if total else 1.0


# -- synthetic corpora --------------------------------------------------------


def synthetic_corpus(
    n_docs: int,
    seed: int = 0,
    lexicon: Sequence[str] | None = None,
    words_per_doc: tuple[int, int] = (100, 600),
    content_share: float = 0.5,
) -> list[dict]:
    """News-like filler documents mixing stopwords and lexicon words."""
    lexicon = list(lexicon or default_lexicon())
    stop = sorted(w for w in default_stopwords() if "'" not in w and len(w) > 1)
    rng = random.Random(f"{seed}:corpus")
    docs = []
    for d in range(n_docs):
        n = rng.randint(*words_per_doc)
        words = []
        sentence_start = True
        for i in range(n):
            if i > 0 and not sentence_start and rng.random() < content_share:
                w = rng.choice(lexicon)
            else:
                w = rng.choice(stop)
                if sentence_start:
                    w = w.capitalize()
            sentence_start = False
            if i < n - 1 and i > 2 and rng.random() < 0.08:
                w += "." if rng.random() < 0.6 else ","
                sentence_start = w.endswith(".")
            words.append(w)
        docs.append({"doc_id": f"syn-{seed}-{d:05d}", "text": " ".join(words) + "."})
    return docs


def synthetic_annotated(
    n_docs: int,
    seed: int = 0,
    fraction: float = 0.2,
    length_range: tuple[int, int] | None = None,
    lexicon: Sequence[str] | None = None,
) -> list[AnnotatedDoc]:
    return [
        annotate(d["doc_id"], d["text"], fraction=fraction, length_range=length_range, seed=seed)
        for d in synthetic_corpus(n_docs, seed, lexicon)
    ]
