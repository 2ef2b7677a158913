"""Regenerate src/phantom_probe/data/toyvoc.json.

The toy vocabulary is 256 byte tokens followed by hand-picked word pieces.
Pieces are chosen so that the greedy encoder reproduces the segmentations
used in the fixture lexicon, and so that every lexicon word admits at least
one alternative segmentation.
"""

import json
from pathlib import Path

from phantom_probe.vocab import Vocabulary, save_vocabulary

DATA = Path(__file__).resolve().parents[1] / "src" / "phantom_probe" / "data"

# word -> extra pieces beyond the byte alphabet. A leading space is literal.
PIECES = {
    "February": [" February", "February", "Feb", "ruary", " Feb"],
    "Saturday": [" Saturday", "Saturday", "Satur", "day", " Satur"],
    "Guy": [" Guy", "Guy"],
    "However": [" However", "However", "How", "ever", " How"],
    "unbelievable": [" unbelievable", "un", "bel", "ievable", " un", "believable", "believ", "able"],
    "repaid": [" repaid", "re", "paid", " re"],
    "HIV": [" HIV", "HIV", "IV", "HI", " H", " HI"],
    "rights": [" rights", " right", "right"],
    "smooth": [" smooth", "smooth", "mooth"],
    "Campaign": [" Campaign", "Campaign", "Camp", "aign", " Camp"],
    "get": [" get", "get"],
    "government": [" government", "government", "govern", "ment", " govern"],
    "minister": [" minister", "minister", "minis", "ter", " minis"],
    "election": [" election", "election", "elect", "ion", " elect", "elec", "tion", " elec"],
    "football": [" football", "football", "foot", "ball", " foot"],
    "hospital": [" hospital", "hospital", "hospit", "al", " hosp", "ital"],
    "company": [" company", "company", "comp", "any", " comp"],
    "police": [" police", "police", "pol", "ice", " pol"],
    "council": [" council", "council", "coun", "cil", " coun"],
    "report": [" report", "report", "rep", "ort", "port"],
    "players": [" players", " player", "player", "play", "ers"],
    "season": [" season", "season", "sea", "son", " sea"],
    "economy": [" economy", "economy", "econ", "omy", " econ"],
    "director": [" director", "director", "direct", "or", " direct"],
    "children": [" children", "children", "child", "ren", " child"],
    "officials": [" officials", " official", "official", "offic", "ials"],
    "century": [" century", "century", "cent", "ury", " cent"],
    "Scotland": [" Scotland", "Scotland", "Scot", "land", " Scot"],
    "London": [" London", "London", "Lon", "don", " Lon"],
    "NATO": [" NATO", "NATO", "NA", "TO", " NA"],
    "BBC": [" BBC", "BBC", "BB", "BC", " BB", " B"],
    "Jubilee": [" Jub", "ilee", " Ju", "bilee", "ub"],
    "Dormer": [" Dorm", "er", "orm", " Dor", "mer"],
    "Clements": [" Clement", "lements"],
    "Manchester": [" Manche", "ter", " Man", "chester"],
    "Edinburgh": [" Edin", "bu", "rgh", " Ed", "inburgh"],
    "Pentagon": [" Penta", "on", " Pent", "agon"],
    "Wimbledon": [" Wimbl", " Wimb", "ledon"],
    "dismissed": [" dismissed", "dis", "missed", " dis", "miss", "ed"],
    "preview": [" preview", "pre", "view", " pre"],
    "quickly": [" quickly", "quick", "ly", " quick"],
    "running": [" running", "runn", "ing", " run", "ning", " runn"],
    "Thursday": [" Thursday", "Thursday", "Thurs", " Thurs"],
    "UK": [" UK", "UK"],
    "teachers": [" teachers", " teacher", "teacher", "teach"],
    "Paris": [" Paris", "Paris", "Par", "is", " Par"],
}

REPLACEMENTS = [
    "March", "Sunday", "Tom", "Nevertheless", "incredible", "returned", "AIDS", "freedoms",
    "gentle", "Movement", "receive", "administration", "secretary", "vote", "soccer", "clinic",
    "firm", "officers", "committee", "study", "athletes", "year", "market", "manager", "kids",
    "authorities", "era", "Wales", "Berlin", "alliance", "broadcaster", "celebration", "Smith",
    "Jones", "Leeds", "Glasgow", "ministry", "tournament", "rejected", "overview", "rapidly",
    "jogging", "Friday", "Britain", "educators", "Rome",
]



def stopword_pieces():
    words = (DATA / "stopwords.txt").read_text(encoding="utf-8").split()
    out = []
    for w in words:
        out += [" " + w, w, " " + w.capitalize(), w.capitalize()]
    return out


def main():
    tokens = [bytes([b]) for b in range(256)]
    seen = set(tokens)

    def add(piece: str):
        raw = piece.encode("utf-8")
        if raw not in seen:
            seen.add(raw)
            tokens.append(raw)

    for word, pieces in PIECES.items():
        for p in pieces:
            add(p)
    for w in REPLACEMENTS:
        add(" " + w)
    add("'s")
    for p in stopword_pieces():
        add(p)
    vocab = Vocabulary(tuple(tokens), mode="byte-level", normalize_whitespace=False)
    save_vocabulary(vocab, DATA / "toyvoc.json")
    (DATA / "lexicon.txt").write_text("\n".join(PIECES) + "\n", encoding="utf-8")
    synonyms = {w: [r] for w, r in zip(PIECES, REPLACEMENTS, strict=True)}
    (DATA / "synonyms.json").write_text(json.dumps(synonyms, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(vocab)} tokens")


if __name__ == "__main__":
    main()
