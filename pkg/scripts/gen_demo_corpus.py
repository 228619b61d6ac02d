#!/usr/bin/env python3
"""Generate the shipped demo evaluation corpus and its lexicon.

200 binary records whose texts are normalizer fixpoints and whose gold
labels agree with the builtin lexicon classifier, so matrix runs over the
file have an analytically known baseline of 1.00.  Deterministic; rerun
only to regenerate the shipped files.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from atnorm.classifiers import score_builtin
from atnorm.normalizer import normalize

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "atnorm" / "data"
SEED = 20260825

LEXICON = ("kill", "hate")

# Filler vocabulary: length >= 3, lowercase ASCII, no lexicon members.
FILLERS = (
    "the", "quick", "brown", "fox", "jumps", "over", "lazy", "dog", "they",
    "said", "that", "story", "about", "river", "stone", "light", "garden",
    "window", "coffee", "reads", "paper", "every", "morning", "train",
    "slowly", "small", "green", "house", "corner", "music", "played", "loud",
    "night", "winter", "came", "early", "this", "year", "people", "walked",
    "market", "bought", "fresh", "bread", "cheese", "letter", "arrived",
    "from", "distant", "friend", "mountain", "road", "turned", "sharply",
    "left", "children", "laughed", "under", "maple", "tree", "clouds",
    "moved", "across", "open", "field", "kettle", "whistled", "kitchen",
    "shelf", "held", "dusty", "books", "candle", "burned", "down", "table",
)

# Hard negatives: near the lexicon but never equal as a token.
NEAR_MISSES = ("killer", "killed", "skill", "skills", "hated", "hates", "hatred", "whatever")


def check_vocabulary() -> None:
    """No filler may collapse into a lexicon word when leet-substituted
    i/a letters are later stripped as punctuation."""
    for word in FILLERS + NEAR_MISSES:
        positions = [k for k, ch in enumerate(word) if ch in "ia"]
        for mask in range(1, 1 << len(positions)):
            dropped = {positions[b] for b in range(len(positions)) if mask >> b & 1}
            remainder = "".join(ch for k, ch in enumerate(word) if k not in dropped)
            assert remainder not in LEXICON, (word, remainder)


def make_sentence(rng: random.Random, insert: str | None, n_words: tuple[int, int] = (8, 14)) -> str:
    words = [rng.choice(FILLERS) for _ in range(rng.randint(*n_words))]
    if insert is not None:
        words.insert(rng.randint(1, len(words) - 1), insert)
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def main() -> None:
    check_vocabulary()
    rng = random.Random(SEED)
    labels = ["positive"] * 100 + ["negative"] * 100
    rng.shuffle(labels)
    lines = []
    for i, label in enumerate(labels, start=1):
        if label == "positive":
            text = make_sentence(rng, rng.choice(LEXICON))
        else:
            insert = rng.choice(NEAR_MISSES) if rng.random() < 0.4 else None
            text = make_sentence(rng, insert)
        assert normalize(text).text == text, f"not a fixpoint: {text!r}"
        assert score_builtin(text, LEXICON).label == label, (text, label)
        lines.append(json.dumps({"id": f"r{i:03d}", "text": text, "label": label}))

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "demo_corpus.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (OUT_DIR / "demo_lexicon.txt").write_text("\n".join(LEXICON) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} records and {len(LEXICON)} lexicon words to {OUT_DIR}")


if __name__ == "__main__":
    main()
