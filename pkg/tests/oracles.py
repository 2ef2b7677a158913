"""Reference implementations kept deliberately naive.

Nothing here imports the package's segmentation or taxonomy code: the
oracles work from the raw token byte strings only.
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
PLAUSIBLE_SINGLES = set(b"ABCDEFGHIJKLMNOPQRSTUVWXYZs")


def toy_tokens() -> list[bytes]:
    """Token byte strings of the bundled toy vocabulary, decoded by hand from the file."""
    import phantom_probe

    doc = json.loads((Path(phantom_probe.__file__).parent / "data" / "toyvoc.json").read_text(encoding="utf-8"))
    # GPT-2 printable mapping, rebuilt independently
    bs = list(range(ord("!"), ord("~") + 1)) + list(range(ord("¡"), ord("¬") + 1)) + list(range(ord("®"), ord("ÿ") + 1))
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    back = {chr(c): b for b, c in zip(bs, cs)}
    return [bytes(back[ch] for ch in tok) for tok in doc["tokens"]]


def brute_segmentations(tokens: list[bytes], surface: bytes, plausible: bool = False) -> set[tuple[int, ...]]:
    """All id sequences concatenating to ``surface``, by plain recursion."""
    allowed = [
        (i, t) for i, t in enumerate(tokens) if not plausible or len(t) != 1 or t[0] in PLAUSIBLE_SINGLES
    ]

    def rec(rest: bytes) -> list[tuple[int, ...]]:
        if not rest:
            return [()]
        out = []
        for i, t in allowed:
            if rest.startswith(t):
                out += [(i,) + tail for tail in rec(rest[len(t):])]
        return out

    return set(rec(surface))


def frozen(name: str):
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))
