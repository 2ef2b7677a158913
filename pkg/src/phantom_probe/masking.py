"""Token-ID blocklists built from phantom edits, and the decode-time filter."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .alignment import Outcome, Trial

FORBID = -100  # OpenAI-compatible logit_bias floor


class EmptySupportError(ValueError):
    """Every candidate token was blocked."""


@dataclass(frozen=True)
class Blocklist:
    blocked_ids: frozenset[int] = frozenset()
    provenance: dict[int, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def __contains__(self, token_id: int) -> bool:
        return token_id in self.blocked_ids

    def __len__(self) -> int:
        return len(self.blocked_ids)

    def blocks(self, ids: Sequence[int]) -> bool:
        return any(i in self.blocked_ids for i in ids)

    def union(self, other: "Blocklist") -> "Blocklist":
        prov = {k: list(v) for k, v in self.provenance.items()}
        for k, keys in other.provenance.items():
            prov.setdefault(k, [])
            prov[k] += [x for x in keys if x not in prov[k]]
        return Blocklist(self.blocked_ids | other.blocked_ids, {k: tuple(sorted(v)) for k, v in prov.items()})

    def to_record(self) -> dict:
        return {
            "ids": sorted(self.blocked_ids),
            "provenance": {str(k): list(self.provenance.get(k, ())) for k in sorted(self.blocked_ids)},
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Blocklist":
        ids = frozenset(int(i) for i in rec["ids"])
        prov = {int(k): tuple(v) for k, v in rec.get("provenance", {}).items()}
        return cls(ids, prov)


def build_blocklist(trials: Iterable[Trial]) -> Blocklist:
    """Union over Different trials of (output span ids - input span ids)."""
    prov: dict[int, set[str]] = {}
    for t in trials:
        if t.outcome is not Outcome.DIFFERENT:
            raise ValueError(f"trial {t.key} is {t.outcome.value}, not Different")
        for tid in set(t.output_ids) - set(t.input_ids):
            prov.setdefault(tid, set()).add(t.key)
    return Blocklist(frozenset(prov), {k: tuple(sorted(v)) for k, v in prov.items()})


@dataclass(frozen=True)
class DecodeFilter:
    blocklist: Blocklist


def apply_filter(filt: DecodeFilter, candidates: Sequence[tuple[int, float]]) -> list[tuple[int, float]]:
    """Drop blocked candidates and renormalize the rest, keeping order."""
    if any(w < 0 for _, w in candidates):
        raise ValueError("candidate weights must be non-negative")
    if not sum(w for _, w in candidates) > 0:
        raise ValueError("candidate weights must have positive total")
    kept = [(tid, w) for tid, w in candidates if tid not in filt.blocklist]
    total = sum(w for _, w in kept)
    if not kept or total <= 0:
        raise EmptySupportError("all candidates are blocked")
    return [(tid, w / total) for tid, w in kept]


def export_logit_bias(blocklist: Blocklist, sentinel: float = FORBID) -> dict[int, float]:
    return {tid: sentinel for tid in sorted(blocklist.blocked_ids)}
