#!/usr/bin/env python3
"""Generate the bundled synthetic inflected corpus under data/mini-latin/.

The vocabulary is built from stem and suffix tables so every gold
segmentation is known by construction. A slice of surface forms is
deliberately ambiguous: their first lexicon analysis (a noun reading)
differs from the verb reading selected under a VERB tag, which is what
separates contextual from acontextual presegmentation downstream.

Deterministic: a fixed seed drives sentence sampling, so reruns
reproduce the committed files byte for byte.
"""

import argparse
import random
from collections import Counter
from fractions import Fraction
from pathlib import Path

SEED = 20260817
TARGET_TOKENS = 50_000

VERB_STEMS = [
    "am", "port", "laud", "voc", "cant", "spect", "ambul", "narr", "pugn",
    "serv", "monstr", "labor", "habit", "nunti", "rog", "orn", "cur",
    "mut", "iuv", "not",
]
VERB_SUFFIXES = ["o", "as", "at", "amus", "atis", "ant", "abam", "abat", "are", "avit"]

NOUN_STEMS = [
    "ros", "puell", "stell", "silv", "terr", "aqu", "lun", "caus", "insul",
    "pecuni", "sagitt", "vacc", "mens", "coron", "vill",
]
NOUN_SUFFIXES = ["a", "ae", "am", "arum", "is"]

ADJ_STEMS = ["magn", "parv", "bon", "long", "alt", "lat", "mir", "valid"]
ADJ_SUFFIXES = ["us", "a", "um", "i", "ae"]

# Each ambiguous surface reads as verb stem + suffix or as a longer noun
# stem + shorter suffix; the noun analysis is listed first in the lexicon.
AMBIGUOUS_STEMS = [
    "fabric", "numer", "oner", "vulner", "moder", "temper", "ponder",
    "gener", "oper", "camer", "miser", "toler",
]
AMBIGUOUS_PATTERNS = [("atis", "at", "is"), ("amus", "am", "us")]

INVARIABLES = [
    ("et", "CCONJ", "Conjunction"),
    ("sed", "CCONJ", "Conjunction"),
    ("nam", "CCONJ", "Conjunction"),
    ("iam", "ADV", "Invariable"),
    ("mox", "ADV", "Invariable"),
    ("ita", "ADV", "Invariable"),
    ("non", "ADV", "Invariable"),
    ("cum", "ADP", "Preposition"),
    ("sub", "ADP", "Preposition"),
    ("per", "ADP", "Preposition"),
]


class Entry:
    """One surface form: its analyses, tag distribution, and per-tag gold."""

    def __init__(self, surface, analyses, tag_weights, gold_by_tag):
        self.surface = surface
        self.analyses = analyses  # [(analyzer_pos, morphemes)], lexicon order
        self.tag_weights = tag_weights  # {UD tag: weight}
        self.gold_by_tag = gold_by_tag  # {UD tag: morphemes}


def build_entries():
    entries = {}

    def add(entry):
        if entry.surface in entries:
            raise SystemExit(f"surface collision: {entry.surface}")
        entries[entry.surface] = entry

    for stem in VERB_STEMS:
        for suf in VERB_SUFFIXES:
            seg = (stem, suf)
            add(Entry(stem + suf, [("Verb", seg)], {"VERB": 1}, {"VERB": seg}))
    for stem in NOUN_STEMS:
        for suf in NOUN_SUFFIXES:
            seg = (stem, suf)
            add(Entry(stem + suf, [("Noun", seg)], {"NOUN": 1}, {"NOUN": seg}))
    for stem in ADJ_STEMS:
        for suf in ADJ_SUFFIXES:
            seg = (stem, suf)
            add(Entry(stem + suf, [("Adjective", seg)], {"ADJ": 1}, {"ADJ": seg}))
    for stem in AMBIGUOUS_STEMS:
        for verb_suf, noun_ext, noun_suf in AMBIGUOUS_PATTERNS:
            verb_seg = (stem, verb_suf)
            noun_seg = (stem + noun_ext, noun_suf)
            add(Entry(
                stem + verb_suf,
                [("Noun", noun_seg), ("Verb", verb_seg)],
                {"VERB": 7, "NOUN": 3},
                {"VERB": verb_seg, "NOUN": noun_seg},
            ))
    for word, ud, analyzer in INVARIABLES:
        add(Entry(word, [(analyzer, (word,))], {ud: 1}, {ud: (word,)}))

    # Same-POS ties exercised by the selection protocol: equal piece
    # counts fall to the longer suffix, unequal counts to more pieces.
    add(Entry(
        "adversari",
        [("Adjective", ("adversar", "i")), ("Verb", ("advers", "ari"))],
        {"VERB": 3, "ADJ": 2},
        {"VERB": ("advers", "ari"), "ADJ": ("adversar", "i")},
    ))
    add(Entry(
        "inordinato",
        [("Verb", ("inordin", "ato")), ("Verb", ("inordin", "at", "o"))],
        {"VERB": 1},
        {"VERB": ("inordin", "at", "o")},
    ))
    return entries


def generate(out_dir: Path):
    entries = build_entries()
    surfaces = sorted(entries)
    rng = random.Random(SEED)
    rng.shuffle(surfaces)
    weights = [1.0 / (rank + 4) for rank in range(len(surfaces))]

    sentences = []
    seen_pairs = set()
    total = 0
    while total < TARGET_TOKENS:
        length = rng.randint(4, 11)
        words = rng.choices(surfaces, weights=weights, k=length)
        tagged = []
        for word in words:
            entry = entries[word]
            tags = sorted(entry.tag_weights)
            tag = rng.choices(tags, [entry.tag_weights[t] for t in tags])[0]
            tagged.append((word, tag))
            seen_pairs.add((word, tag))
        sentences.append(tagged)
        total += length

    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "corpus.txt", "w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(" ".join(w for w, _ in sent) + "\n")

    with open(out_dir / "tagged.tsv", "w", encoding="utf-8") as fh:
        for i, sent in enumerate(sentences):
            if i:
                fh.write("\n")
            for word, tag in sent:
                fh.write(f"{word}\t{tag}\n")

    with open(out_dir / "lexicon.tsv", "w", encoding="utf-8") as fh:
        for surface in sorted(entries):
            for idx, (pos, seg) in enumerate(entries[surface].analyses, start=1):
                fh.write(f"{surface}\t{idx}\t{pos}\t{'@'.join(seg)}\n")

    suffixes = sorted({m for e in entries.values() for _, seg in e.analyses for m in seg[1:]})
    (out_dir / "suffixes.txt").write_text("\n".join(suffixes) + "\n", encoding="utf-8")

    gold_ctx = sorted(seen_pairs)
    with open(out_dir / "gold-contextual.tsv", "w", encoding="utf-8") as fh:
        for word, tag in gold_ctx:
            fh.write(f"{word}\t{tag}\t{'@'.join(entries[word].gold_by_tag[tag])}\n")

    gold_actx = sorted({w for w, _ in seen_pairs})
    with open(out_dir / "gold-acontextual.tsv", "w", encoding="utf-8") as fh:
        for word in gold_actx:
            fh.write(f"{word}\t-\t{'@'.join(entries[word].analyses[0][1])}\n")

    ctx_pieces = sum(len(entries[w].gold_by_tag[t]) for w, t in gold_ctx)
    actx_pieces = sum(len(entries[w].analyses[0][1]) for w in gold_actx)
    ambiguous = sum(1 for w, t in gold_ctx if len(entries[w].analyses) > 1)
    tokens = sum(len(s) for s in sentences)
    type_counts = Counter(w for s in sentences for w, _ in s)

    print(f"sentences {len(sentences)}")
    print(f"tokens {tokens}")
    print(f"types {len(type_counts)}")
    print(f"lexicon surfaces {len(entries)}")
    print(f"suffix list {len(suffixes)}")
    print(f"gold contextual rows {len(gold_ctx)} (ambiguous-surface rows {ambiguous})")
    print(f"gold acontextual rows {len(gold_actx)}")
    print(f"gold contextual fertility {Fraction(ctx_pieces, len(gold_ctx))} = {ctx_pieces / len(gold_ctx)!r}")
    print(f"gold acontextual fertility {Fraction(actx_pieces, len(gold_actx))} = {actx_pieces / len(gold_actx)!r}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/mini-latin", help="output directory")
    args = parser.parse_args()
    generate(Path(args.out))


if __name__ == "__main__":
    main()
