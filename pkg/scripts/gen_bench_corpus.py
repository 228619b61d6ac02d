#!/usr/bin/env python3
"""Generate the shipped throughput benchmark corpus.

1,200 single-line texts with a mean length inside 80-120 codepoints:
roughly a third clean prose, the rest attacked with a rotating set of
kinds so the benchmark exercises every pass.  Deterministic.
"""

from __future__ import annotations

import random
import statistics
from pathlib import Path

from atnorm.attacks import AttackSpec, apply_attack, derive_seed, sample_params

from gen_demo_corpus import FILLERS, make_sentence

OUT = Path(__file__).resolve().parent.parent / "src" / "atnorm" / "data" / "bench_corpus.txt"
SEED = 4047
N_TEXTS = 1200

# Two clean slots per cycle keep the mean length near the clean baseline
# even though insertion attacks lengthen their share of the texts.
ROTATION = (
    None,
    None,
    "insert_zero_width_chars",
    "replace_fun_fonts",
    "insert_punctuation_chars",
    "insert_whitespace_chars",
    "replace_similar_unicode_chars",
    "replace_similar_chars",
    "simulate_typos",
    "merge_words",
    "split_words",
    None,
)


def main() -> None:
    rng = random.Random(SEED)
    texts = []
    for i in range(N_TEXTS):
        base = make_sentence(rng, rng.choice(FILLERS), n_words=(11, 17))
        kind = ROTATION[i % len(ROTATION)]
        if kind is None:
            texts.append(base)
            continue
        seed = derive_seed(SEED, i, kind)
        attacked = apply_attack(base, AttackSpec(kind, sample_params(seed), seed))
        texts.append(attacked.replace("\n", " "))

    mean_len = statistics.fmean(len(t) for t in texts)
    assert len(texts) >= 1000, len(texts)
    assert 80 <= mean_len <= 120, mean_len
    OUT.write_text("\n".join(texts) + "\n", encoding="utf-8")
    print(f"wrote {len(texts)} texts, mean length {mean_len:.1f} codepoints, to {OUT}")


if __name__ == "__main__":
    main()
