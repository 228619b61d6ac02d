"""Shared fixtures: a seeded clean-sentence factory, an edit-distance
oracle, and the frozen golden normalization pairs."""

from __future__ import annotations

import random

import pytest

from atnorm.normalizer import Normalizer

# Vocabulary for property corpora: includes one-letter words on purpose so
# collapse-pass merging rules are exercised, but sentences are filtered to
# normalizer fixpoints before use.
WORDS = (
    "a", "i", "it", "to", "be", "we", "dog", "cat", "sun", "run", "the",
    "quick", "brown", "fox", "jumps", "over", "lazy", "while", "stone",
    "river", "light", "garden", "window", "coffee", "morning", "train",
    "people", "market", "letter", "mountain", "children", "kettle",
)


def levenshtein(a: str, b: str) -> int:
    """Two-row dynamic-programming edit distance (insert/delete/substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def clean_sentences(n: int, seed: int, normalizer: Normalizer | None = None) -> list[str]:
    """Seeded sentences that the default pipeline maps to themselves."""
    norm = normalizer if normalizer is not None else Normalizer()
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        words = [rng.choice(WORDS) for _ in range(rng.randint(3, 12))]
        text = " ".join(words)
        if norm.normalize(text).text == text:
            out.append(text)
    return out


@pytest.fixture(scope="session")
def normalizer() -> Normalizer:
    return Normalizer()


# (attacked input, expected normalized output) reference pairs.  The two
# styled-unicode inputs are spelled with escapes so the intent survives any
# editor normalization: a mathematical-monospace sentence and a mixed
# lookalike/fullwidth sentence, both of which must map back to plain ASCII.
FUN_FONT_SENTENCE = (
    "\U0001d683\U0001d691\U0001d692\U0001d69c \U0001d692\U0001d69c "
    "\U0001d68a\U0001d69e\U0001d690\U0001d696\U0001d68e\U0001d697"
    "\U0001d69d\U0001d68e\U0001d68d \U0001d69d\U0001d68e\U0001d6a1\U0001d69d"
)
SIMILAR_UNICODE_SENTENCE = (
    "Thіѕ іѕ аuℊｍеñtеⅆ"
    " ｔｅｘｔ"
)
ZERO_WIDTH_SENTENCE = "Th​is is aug‍men⁠ted te﻿xt"

GOLDEN_PAIRS = [
    ("This is augmented text", "This is augmented text"),
    ("Th.i.s ,is ...a.ug;m!en't?ed, ,te!x.t", "This ,is ...augmented, ,text"),
    ("T h i s  is  a u g m e n t e d   text", "This is augmented text"),
    (ZERO_WIDTH_SENTENCE, "This is augmented text"),
    ("Thisis augmented text", "Thisis augmented text"),
    (FUN_FONT_SENTENCE, "This is augmented text"),
    ("Th!s is @ugmented tex7", "Th!s is @ugmented tex7"),
    (SIMILAR_UNICODE_SENTENCE, "This is augmented text"),
    ("This is augmentde texht", "This is augmentde texht"),
    ("Th is is augment ed text", "Th is is augment ed text"),
]


@pytest.fixture(scope="session")
def golden_pairs() -> list[tuple[str, str]]:
    return GOLDEN_PAIRS
