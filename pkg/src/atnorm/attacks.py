"""Seeded character-level attack generators.

Nine attack kinds mirror the common augmentation families: three insertion
attacks the normalizer fully or mostly reverses, two replacement attacks it
reverses via tables, and four it deliberately leaves alone (leetspeak,
typos, word splits/merges).

Determinism contract: ``apply_attack(text, spec)`` is a pure function of
(text, spec); random draws come from ``random.Random(spec.seed)`` in a
fixed left-to-right order.  Corpus runs derive per-record seeds from
(master seed, record index, kind), so results never depend on worker count
or processing order.

Parameter consumption per kind (the shared AttackParams schema carries
more knobs than any one kind uses):

==============================  =============================================
insert_punctuation_chars        aug_word_p, aug_char_p, granularity
insert_whitespace_chars         aug_word_p, aug_char_p, granularity
insert_zero_width_chars         aug_word_p, aug_char_p, granularity
merge_words                     aug_word_p
replace_fun_fonts               aug_word_p or aug_char_p (granularity), vary_fonts
replace_similar_chars           aug_word_p, aug_char_p
replace_similar_unicode_chars   aug_word_p, aug_char_p
simulate_typos                  aug_word_p
split_words                     aug_word_p
==============================  =============================================

aug_p is sampled for schema fidelity but consumed by no kind: forcing
aug_word_p = aug_char_p = 0 must make every kind the identity.

Two clamps keep the insertion kinds honestly reversible (see the repo
notes): a word that receives any interior punctuation receives at least
two marks, and whitespace insertions are emitted as full explosions or
two-space runs, so the collapse pass strictly reduces the damage of every
change these kinds make.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field

from .chardata import builtin_merged_table

__all__ = [
    "ATTACK_KINDS",
    "AttackParams",
    "AttackSpec",
    "sample_params",
    "derive_seed",
    "apply_attack",
    "attack_corpus",
    "PUNCTUATION_POOL",
    "ZERO_WIDTH_POOL",
    "LEET_MAP",
    "FONT_ALPHABETS",
]

ATTACK_KINDS = (
    "insert_punctuation_chars",
    "insert_whitespace_chars",
    "insert_zero_width_chars",
    "merge_words",
    "replace_fun_fonts",
    "replace_similar_chars",
    "replace_similar_unicode_chars",
    "simulate_typos",
    "split_words",
)

GRANULARITIES = ("char", "word", "all")

PUNCTUATION_POOL = ".,;!?'"

ZERO_WIDTH_POOL = "​‌‍⁠﻿"

LEET_MAP = {"i": "!", "a": "@", "t": "7", "s": "5", "e": "3", "o": "0", "l": "1"}


@dataclass(frozen=True)
class AttackParams:
    """Shared parameter schema; sampling ranges follow the usual augmenter
    defaults (word/overall probabilities in [0.3, 1.0], per-character
    probability in [0.1, 0.4]).  Values outside the sampling ranges are
    legal as long as they are probabilities, so callers can force
    edge cases like the all-zeros identity."""

    aug_p: float = 0.65
    aug_word_p: float = 0.65
    aug_char_p: float = 0.25
    granularity: str = "word"
    vary_fonts: bool = False

    def __post_init__(self):
        for name in ("aug_p", "aug_word_p", "aug_char_p"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1], got {v!r}")
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        if not isinstance(self.vary_fonts, bool):
            raise ValueError("vary_fonts must be a bool")

    def to_json(self) -> dict:
        return {
            "aug_p": self.aug_p,
            "aug_word_p": self.aug_word_p,
            "aug_char_p": self.aug_char_p,
            "granularity": self.granularity,
            "vary_fonts": self.vary_fonts,
        }

    @staticmethod
    def from_json(obj: dict) -> "AttackParams":
        return AttackParams(**obj)


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    params: AttackParams = field(default_factory=AttackParams)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}; valid: {list(ATTACK_KINDS)}")


def sample_params(seed: int) -> AttackParams:
    """Uniform parameter draw; fixed draw order makes this seed-stable."""
    rng = random.Random(seed)
    return AttackParams(
        aug_p=rng.uniform(0.3, 1.0),
        aug_word_p=rng.uniform(0.3, 1.0),
        aug_char_p=rng.uniform(0.1, 0.4),
        granularity=rng.choice(GRANULARITIES),
        vary_fonts=rng.choice((False, True)),
    )


def derive_seed(master_seed: int, index: int, kind: str, salt: str = "") -> int:
    """Order-independent per-record seed."""
    key = f"{master_seed}:{index}:{kind}:{salt}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


# ---------------------------------------------------------------------------
# Text plumbing

_GAP_RE = re.compile(r"\s+")


def _split(text: str) -> tuple[list[str], list[str]]:
    """(words, gaps) with len(gaps) == len(words) + 1; edge gaps may be ''."""
    parts = _GAP_RE.split(text)  # words at even indices, '' at edges
    seps = _GAP_RE.findall(text)
    words = [w for w in parts if w != ""]
    if not words:
        return [], [text]
    gaps = [""] * (len(words) + 1)
    if parts[0] == "":
        gaps[0] = seps.pop(0)
    if parts[-1] == "":
        gaps[-1] = seps.pop()
    gaps[1 : 1 + len(seps)] = seps
    return words, gaps


def _join(words: list[str], gaps: list[str]) -> str:
    parts = [gaps[0]]
    for w, g in zip(words, gaps[1:]):
        parts.append(w)
        parts.append(g)
    return "".join(parts)


def _word_gate(rng: random.Random, params: AttackParams) -> bool:
    """Char granularity exposes every word; word/all gate on aug_word_p."""
    if params.granularity == "char":
        return True
    return rng.random() < params.aug_word_p


# ---------------------------------------------------------------------------
# Insertion kinds


def _attack_insert_punctuation(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    edge_marks = params.granularity == "all"
    for wi, word in enumerate(words):
        if not _word_gate(rng, params):
            continue
        nb = len(word) - 1
        if nb < 2:
            continue  # cannot host the two interior marks the reversal needs
        chosen = [b for b in range(nb) if rng.random() < params.aug_char_p]
        if chosen:
            while len(chosen) < 2:
                extra = rng.randrange(nb)
                if extra not in chosen:
                    chosen.append(extra)
            chosen.sort()
            out = []
            for k, ch in enumerate(word):
                out.append(ch)
                if k < nb and k in set(chosen):
                    out.append(rng.choice(PUNCTUATION_POOL))
            new_word = "".join(out)
            if edge_marks:
                if rng.random() < params.aug_char_p:
                    new_word = rng.choice(PUNCTUATION_POOL) + new_word
                if rng.random() < params.aug_char_p:
                    new_word = new_word + rng.choice(PUNCTUATION_POOL)
            words[wi] = new_word
    return _join(words, gaps)


def _attack_insert_whitespace(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    if params.granularity == "char":
        # Two-space runs at chosen boundaries: the collapse pass shrinks
        # each to one space, so every insertion strictly loses ground.
        # Boundaries that would shear off a single character are skipped;
        # a lone fragment beside a real one-letter word would otherwise be
        # glued to it by the normalizer, damaging a legitimate boundary.
        for wi, word in enumerate(words):
            if len(word) < 4:
                continue
            pieces = [word[:2]]
            for k in range(2, len(word) - 1):
                if rng.random() < params.aug_char_p:
                    pieces.append("  ")
                pieces.append(word[k])
            pieces.append(word[-1])
            words[wi] = "".join(pieces)
        return _join(words, gaps)

    exploded = [False] * len(words)
    for wi, word in enumerate(words):
        if len(word) >= 2 and rng.random() < params.aug_word_p:
            words[wi] = " ".join(word)
            exploded[wi] = True
    # Keep exploded words separable from their neighbors: pad single-space
    # gaps next to an explosion up to two spaces.
    for gi in range(1, len(gaps) - 1):
        if (exploded[gi - 1] or exploded[gi]) and gaps[gi] == " ":
            gaps[gi] = "  "
    if params.granularity == "all":
        for gi in range(1, len(gaps) - 1):
            if rng.random() < params.aug_char_p:
                gaps[gi] = gaps[gi] + " "
    return _join(words, gaps)


def _attack_insert_zero_width(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    edges = params.granularity == "all"
    for wi, word in enumerate(words):
        if not _word_gate(rng, params):
            continue
        pieces = []
        if edges and rng.random() < params.aug_char_p:
            pieces.append(rng.choice(ZERO_WIDTH_POOL))
        for k, ch in enumerate(word):
            pieces.append(ch)
            if k < len(word) - 1 and rng.random() < params.aug_char_p:
                pieces.append(rng.choice(ZERO_WIDTH_POOL))
        if edges and rng.random() < params.aug_char_p:
            pieces.append(rng.choice(ZERO_WIDTH_POOL))
        words[wi] = "".join(pieces)
    return _join(words, gaps)


# ---------------------------------------------------------------------------
# Replacement kinds

# Styled alphabets: (name, uppercase base, lowercase base, digit base or None,
# {char: codepoint} fill-ins for the reserved holes in the math blocks).
_FONT_SPECS = [
    ("bold", 0x1D400, 0x1D41A, 0x1D7CE, {}),
    ("italic", 0x1D434, 0x1D44E, None, {"h": 0x210E}),
    ("bold_italic", 0x1D468, 0x1D482, None, {}),
    ("script", 0x1D49C, 0x1D4B6, None, {
        "B": 0x212C, "E": 0x2130, "F": 0x2131, "H": 0x210B, "I": 0x2110,
        "L": 0x2112, "M": 0x2133, "R": 0x211B, "e": 0x212F, "g": 0x210A,
        "o": 0x2134,
    }),
    ("bold_script", 0x1D4D0, 0x1D4EA, None, {}),
    ("fraktur", 0x1D504, 0x1D51E, None, {
        "C": 0x212D, "H": 0x210C, "I": 0x2111, "R": 0x211C, "Z": 0x2128,
    }),
    ("double_struck", 0x1D538, 0x1D552, 0x1D7D8, {
        "C": 0x2102, "H": 0x210D, "N": 0x2115, "P": 0x2119, "Q": 0x211A,
        "R": 0x211D, "Z": 0x2124,
    }),
    ("bold_fraktur", 0x1D56C, 0x1D586, None, {}),
    ("sans", 0x1D5A0, 0x1D5BA, 0x1D7E2, {}),
    ("sans_bold", 0x1D5D4, 0x1D5EE, 0x1D7EC, {}),
    ("sans_italic", 0x1D608, 0x1D622, None, {}),
    ("sans_bold_italic", 0x1D63C, 0x1D656, None, {}),
    ("monospace", 0x1D670, 0x1D68A, 0x1D7F6, {}),
    ("fullwidth", 0xFF21, 0xFF41, 0xFF10, {}),
]

_ASCII_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_ASCII_LOWER = "abcdefghijklmnopqrstuvwxyz"


def _build_fonts() -> dict[str, dict[str, str]]:
    fonts: dict[str, dict[str, str]] = {}
    for name, upper, lower, digits, fills in _FONT_SPECS:
        table: dict[str, str] = {}
        for k, ch in enumerate(_ASCII_UPPER):
            table[ch] = chr(upper + k)
        for k, ch in enumerate(_ASCII_LOWER):
            table[ch] = chr(lower + k)
        if digits is not None:
            for k in range(10):
                table[str(k)] = chr(digits + k)
        for ch, cp in fills.items():
            table[ch] = chr(cp)
        fonts[name] = table
    circled: dict[str, str] = {}
    for k, ch in enumerate(_ASCII_UPPER):
        circled[ch] = chr(0x24B6 + k)
    for k, ch in enumerate(_ASCII_LOWER):
        circled[ch] = chr(0x24D0 + k)
    circled["0"] = "⓪"
    for k in range(1, 10):
        circled[str(k)] = chr(0x2460 + k - 1)
    fonts["circled"] = circled
    return fonts


FONT_ALPHABETS: dict[str, dict[str, str]] = _build_fonts()
_FONT_NAMES = tuple(sorted(FONT_ALPHABETS))


def _attack_fun_fonts(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    global_font = None if params.vary_fonts else FONT_ALPHABETS[rng.choice(_FONT_NAMES)]
    per_char = params.granularity == "char"
    for wi, word in enumerate(words):
        if not per_char and rng.random() >= params.aug_word_p:
            continue
        font = global_font if global_font is not None else FONT_ALPHABETS[rng.choice(_FONT_NAMES)]
        out = []
        for ch in word:
            if per_char and rng.random() >= params.aug_char_p:
                out.append(ch)
            else:
                out.append(font.get(ch, ch))
        words[wi] = "".join(out)
    return _join(words, gaps)


def _attack_similar_chars(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    for wi, word in enumerate(words):
        if not _word_gate(rng, params):
            continue
        out = []
        for ch in word:
            if ch in LEET_MAP and rng.random() < params.aug_char_p:
                out.append(LEET_MAP[ch])
            else:
                out.append(ch)
        words[wi] = "".join(out)
    return _join(words, gaps)


def _inverse_confusables() -> dict[str, tuple[str, ...]]:
    inverse: dict[str, list[str]] = {}
    for src, repl in builtin_merged_table().entries.items():
        if len(src) == 1 and len(repl) == 1:
            inverse.setdefault(repl, []).append(src)
    return {ch: tuple(sorted(opts)) for ch, opts in inverse.items()}


_INVERSE_CONFUSABLES: dict[str, tuple[str, ...]] | None = None


def _attack_similar_unicode(text: str, params: AttackParams, rng: random.Random) -> str:
    global _INVERSE_CONFUSABLES
    if _INVERSE_CONFUSABLES is None:
        _INVERSE_CONFUSABLES = _inverse_confusables()
    inverse = _INVERSE_CONFUSABLES
    words, gaps = _split(text)
    for wi, word in enumerate(words):
        if not _word_gate(rng, params):
            continue
        out = []
        for ch in word:
            options = inverse.get(ch)
            if options and rng.random() < params.aug_char_p:
                out.append(rng.choice(options))
            else:
                out.append(ch)
        words[wi] = "".join(out)
    return _join(words, gaps)


# ---------------------------------------------------------------------------
# Word-level kinds


def _qwerty_neighbors() -> dict[str, str]:
    rows = ("qwertyuiop", "asdfghjkl", "zxcvbnm")
    neighbors: dict[str, set[str]] = {}
    for ri, row in enumerate(rows):
        for ci, ch in enumerate(row):
            near = neighbors.setdefault(ch, set())
            if ci > 0:
                near.add(row[ci - 1])
            if ci + 1 < len(row):
                near.add(row[ci + 1])
            for other in (ri - 1, ri + 1):
                if 0 <= other < len(rows):
                    orow = rows[other]
                    if ci < len(orow):
                        near.add(orow[ci])
    return {ch: "".join(sorted(near)) for ch, near in neighbors.items()}


_QWERTY = _qwerty_neighbors()
_TYPO_OPS = ("substitute", "transpose", "delete", "duplicate")


def _attack_typos(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    for wi, word in enumerate(words):
        if rng.random() >= params.aug_word_p:
            continue
        op = rng.choice(_TYPO_OPS)
        if op == "substitute":
            candidates = [k for k, ch in enumerate(word) if ch.lower() in _QWERTY]
            if not candidates:
                continue
            k = rng.choice(candidates)
            ch = word[k]
            repl = rng.choice(_QWERTY[ch.lower()])
            if ch.isupper():
                repl = repl.upper()
            words[wi] = word[:k] + repl + word[k + 1 :]
        elif op == "transpose":
            if len(word) < 2:
                continue
            k = rng.randrange(len(word) - 1)
            words[wi] = word[:k] + word[k + 1] + word[k] + word[k + 2 :]
        elif op == "delete":
            if len(word) < 2:
                continue
            k = rng.randrange(len(word))
            words[wi] = word[:k] + word[k + 1 :]
        else:  # duplicate
            k = rng.randrange(len(word))
            words[wi] = word[: k + 1] + word[k] + word[k + 1 :]
    return _join(words, gaps)


def _attack_split_words(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    for wi, word in enumerate(words):
        if len(word) < 2 or rng.random() >= params.aug_word_p:
            continue
        k = rng.randrange(1, len(word))
        words[wi] = word[:k] + " " + word[k:]
    return _join(words, gaps)


def _attack_merge_words(text: str, params: AttackParams, rng: random.Random) -> str:
    words, gaps = _split(text)
    for gi in range(1, len(gaps) - 1):
        if rng.random() < params.aug_word_p:
            gaps[gi] = ""
    return _join(words, gaps)


_ATTACK_FUNCS = {
    "insert_punctuation_chars": _attack_insert_punctuation,
    "insert_whitespace_chars": _attack_insert_whitespace,
    "insert_zero_width_chars": _attack_insert_zero_width,
    "merge_words": _attack_merge_words,
    "replace_fun_fonts": _attack_fun_fonts,
    "replace_similar_chars": _attack_similar_chars,
    "replace_similar_unicode_chars": _attack_similar_unicode,
    "simulate_typos": _attack_typos,
    "split_words": _attack_split_words,
}


def apply_attack(text: str, spec: AttackSpec) -> str:
    """Deterministic in (text, spec); see the module docstring."""
    rng = random.Random(spec.seed)
    return _ATTACK_FUNCS[spec.kind](text, spec.params, rng)


def attack_corpus(
    records,
    kind: str,
    master_seed: int,
    field_name: str = "text",
):
    """Attack a record stream; yields (attacked record, metadata row).

    ``field_name`` is "text", "premise", "hypothesis" or "both" (premise and
    hypothesis, each under its own derived seed).  Records are plain dicts;
    non-selected fields pass through untouched.
    """
    if kind not in ATTACK_KINDS:
        raise ValueError(f"unknown attack kind {kind!r}; valid: {list(ATTACK_KINDS)}")
    fields = ("premise", "hypothesis") if field_name == "both" else (field_name,)
    for index, record in enumerate(records):
        out = dict(record)
        seed = derive_seed(master_seed, index, kind)
        params = sample_params(seed)
        for f in fields:
            if f not in out:
                raise KeyError(f"record {out.get('id', index)!r} has no field {f!r}")
            fseed = seed if len(fields) == 1 else derive_seed(master_seed, index, kind, salt=f)
            out[f] = apply_attack(out[f], AttackSpec(kind, params, fseed))
        meta = {
            "id": out.get("id", index),
            "kind": kind,
            "seed": seed,
            "params": params.to_json(),
        }
        yield out, meta
