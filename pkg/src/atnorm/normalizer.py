"""Reversal pipeline for character-level text attacks.

Passes run in a fixed order, each undoing one attack family:

1. ``zero_width``          strips invisible codepoints.
2. ``confusables``         maps styled/look-alike codepoints to ASCII.
3. ``insertion_collapse``  removes punctuation flooding and whitespace
                           explosions (Table-style "T h i s" -> "This").
4. ``censorship``          restores punctuation-masked lexicon words
                           ("k!ll" -> "kill").

``normalize`` returns the output text plus a replayable span trace against
the original input.  The pipeline is idempotent: normalizing a second time
never changes anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import _backend
from .chardata import (
    CharClassSet,
    ConfusableTable,
    builtin_char_classes,
    builtin_tables,
    merge_tables,
)
from .edits import EditComposer, NormalizationResult

__all__ = [
    "PASS_ORDER",
    "NormalizerConfig",
    "Normalizer",
    "normalize",
    "is_url_like",
]

PASS_ORDER = ("zero_width", "confusables", "insertion_collapse", "censorship")


@dataclass(frozen=True)
class NormalizerConfig:
    """Validated knobs for the pipeline.

    ``interior_punct_threshold`` is the minimum count of punctuation marks
    strictly inside a token before the collapse pass rewrites it; the
    default of 2 leaves contractions and single hyphenations alone.
    """

    tables: tuple[ConfusableTable, ...] | None = None  # None = built-in set
    char_classes: CharClassSet | None = None  # None = built-in file
    interior_punct_threshold: int = 2
    url_detection: bool = True
    censor_lexicon: tuple[str, ...] = ()
    enabled_passes: tuple[str, ...] = PASS_ORDER

    def __post_init__(self):
        if not isinstance(self.interior_punct_threshold, int) or isinstance(
            self.interior_punct_threshold, bool
        ):
            raise ValueError("interior_punct_threshold must be an int")
        if self.interior_punct_threshold < 1:
            raise ValueError("interior_punct_threshold must be >= 1")
        object.__setattr__(self, "censor_lexicon", tuple(self.censor_lexicon))
        for word in self.censor_lexicon:
            if len(word) < 3 or not word.isascii() or not word.isalpha() or not word.islower():
                raise ValueError(
                    f"censor lexicon word {word!r} must be >=3 lowercase ASCII letters"
                )
        object.__setattr__(self, "enabled_passes", tuple(self.enabled_passes))
        unknown = [p for p in self.enabled_passes if p not in PASS_ORDER]
        if unknown:
            raise ValueError(f"unknown pass name(s) {unknown}; valid: {list(PASS_ORDER)}")
        if self.tables is not None:
            object.__setattr__(self, "tables", tuple(self.tables))

    @cached_property
    def resolved_tables(self) -> tuple[ConfusableTable, ...]:
        return self.tables if self.tables is not None else builtin_tables()

    @cached_property
    def merged_table(self) -> ConfusableTable:
        return merge_tables(self.resolved_tables)

    @cached_property
    def classes(self) -> CharClassSet:
        return self.char_classes if self.char_classes is not None else builtin_char_classes()

    @cached_property
    def ordered_passes(self) -> tuple[str, ...]:
        # Execution order is fixed; the config only chooses the subset.
        enabled = set(self.enabled_passes)
        return tuple(p for p in PASS_ORDER if p in enabled)


_DEFAULT_CONFIG: NormalizerConfig | None = None


def _default_config() -> NormalizerConfig:
    global _DEFAULT_CONFIG
    if _DEFAULT_CONFIG is None:
        _DEFAULT_CONFIG = NormalizerConfig()
    return _DEFAULT_CONFIG


def is_url_like(token: str) -> bool:
    """True for tokens the collapse pass must not rewrite.

    A token is URL-like when it contains "://", starts with "www.", or has
    the shape <alnum-label>(.<alnum-label>)+/<anything> where the label
    right before the first "/" is 2-6 letters.
    """
    if "://" in token:
        return True
    if token.startswith("www."):
        return True
    slash = token.find("/")
    if slash <= 0:
        return False
    labels = token[:slash].split(".")
    if len(labels) < 2:
        return False
    for lab in labels:
        if not lab or not lab.isascii() or not lab.isalnum():
            return False
    final = labels[-1]
    return final.isalpha() and 2 <= len(final) <= 6


# ---------------------------------------------------------------------------
# Pass 3: insertion collapse


def _collapse_edits(
    text: str, classes: CharClassSet, threshold: int, url_detection: bool
) -> list[tuple[int, int, str]]:
    ws = classes.whitespace
    punct = classes.punctuation
    n = len(text)

    # Segment into alternating gaps (whitespace runs) and tokens.
    gaps: list[tuple[int, int]] = []  # len(tokens)+1 slots; (start, start) if absent
    tokens: list[tuple[int, int]] = []
    i = 0
    pending_gap_start = 0
    while i < n:
        if text[i] in ws:
            j = i + 1
            while j < n and text[j] in ws:
                j += 1
            gaps.append((i, j))
            i = j
        else:
            if len(gaps) == len(tokens):
                gaps.append((i, i))  # empty gap before this token
            j = i + 1
            while j < n and text[j] not in ws:
                j += 1
            tokens.append((i, j))
            i = j
    if len(gaps) == len(tokens):
        gaps.append((n, n))  # empty trailing gap

    # Per-token punctuation collapse decisions.
    outs: list[str] = []
    interior_deletions: list[list[int]] = []
    for s, e in tokens:
        raw = text[s:e]
        li = 0
        while li < len(raw) and raw[li] in punct:
            li += 1
        ri = len(raw)
        while ri > li and raw[ri - 1] in punct:
            ri -= 1
        core = raw[li:ri]
        interior = [s + li + k for k, c in enumerate(core) if c in punct]
        deletions: list[int] = []
        if len(interior) >= threshold:
            exempt = url_detection and (is_url_like(raw) or is_url_like(core))
            if not exempt:
                deletions = interior
        if deletions:
            drop = {p - s for p in deletions}
            outs.append("".join(c for k, c in enumerate(raw) if k not in drop))
        else:
            outs.append(raw)
        interior_deletions.append(deletions)

    def single_alnum(tok: str) -> bool:
        return len(tok) == 1 and tok.isalnum()

    # Round 1: concatenate runs of single-character alphanumeric tokens
    # joined by exactly one whitespace codepoint.  Longer whitespace runs
    # are hard word boundaries here.
    m = len(tokens)
    drop_gap = [False] * (m + 1 if m else 0)
    if m:
        k = 0
        while k < m:
            if single_alnum(outs[k]):
                run_end = k
                while (
                    run_end + 1 < m
                    and single_alnum(outs[run_end + 1])
                    and gaps[run_end + 1][1] - gaps[run_end + 1][0] == 1
                ):
                    run_end += 1
                if run_end > k:
                    for g in range(k + 1, run_end + 1):
                        drop_gap[g] = True
                    k = run_end + 1
                    continue
            k += 1

        # Round 2: whitespace runs collapse to one space, which turns the
        # old hard boundaries into single gaps; merge any single-character
        # tokens still adjacent so the output is a fixpoint.
        unit_single = []  # per token: is it still a lone single after round 1?
        k = 0
        while k < m:
            j = k
            while j + 1 < m and drop_gap[j + 1]:
                j += 1
            merged = j > k
            for t in range(k, j + 1):
                unit_single.append(not merged and single_alnum(outs[t]))
            k = j + 1
        k = 0
        while k < m:
            if unit_single[k] and k + 1 < m and unit_single[k + 1] and not drop_gap[k + 1]:
                drop_gap[k + 1] = True
            k += 1

    # Emit edits in input order.
    edits: list[tuple[int, int, str]] = []
    for idx in range(m):
        gs, ge = gaps[idx]
        if ge > gs:
            if idx > 0 and drop_gap[idx]:
                edits.append((gs, ge, ""))
            elif text[gs:ge] != " ":
                edits.append((gs, ge, " "))
        for p in interior_deletions[idx]:
            edits.append((p, p + 1, ""))
    if m:
        gs, ge = gaps[m]
        if ge > gs and text[gs:ge] != " ":
            edits.append((gs, ge, " "))
    elif gaps and gaps[0][1] > gaps[0][0]:
        # Whitespace-only input: one gap, no tokens.
        gs, ge = gaps[0]
        if text[gs:ge] != " ":
            edits.append((gs, ge, " "))
    return edits


# ---------------------------------------------------------------------------
# Pass 4: censorship decode


def _censorship_edits(
    text: str, classes: CharClassSet, lexicon: tuple[str, ...]
) -> list[tuple[int, int, str]]:
    if not lexicon:
        return []
    ws = classes.whitespace
    punct = classes.punctuation
    edits: list[tuple[int, int, str]] = []
    n = len(text)
    i = 0
    while i < n:
        if text[i] in ws:
            i += 1
            continue
        j = i + 1
        while j < n and text[j] not in ws:
            j += 1
        token = text[i:j]
        li = 0
        while li < len(token) and token[li] in punct:
            li += 1
        rest = token[li:]
        for word in lexicon:  # first lexicon word wins on ambiguity
            L = len(word)
            if len(rest) < L:
                continue
            remainder = rest[L:]
            if remainder and any(c not in punct for c in remainder):
                continue
            region = rest[:L]
            if region[0].casefold() != word[0]:
                continue
            masked = False
            ok = True
            for k in range(1, L):
                if region[k].casefold() == word[k]:
                    continue
                if region[k] in punct:
                    masked = True
                else:
                    ok = False
                    break
            if ok and masked:
                repl = (word[0].upper() if region[0].isupper() else word[0]) + word[1:]
                edits.append((i + li, i + li + L, repl))
                break
        i = j
    return edits


# ---------------------------------------------------------------------------
# Pipeline


class Normalizer:
    """Bound pipeline; reuse one instance when normalizing many texts."""

    def __init__(self, config: NormalizerConfig | None = None, backend: str | None = None):
        self.config = config if config is not None else _default_config()
        cfg = self.config
        self._classes = cfg.classes
        self._zw = self._classes.zero_width
        self._zw_non_ascii = self._classes.zero_width_non_ascii
        table = cfg.merged_table
        self._by_first = table.by_first
        self._table_non_ascii = table.non_ascii_only
        self._passes = cfg.ordered_passes
        if backend is None:
            self._strip_zero_width = _backend.strip_zero_width
            self._map_confusables = _backend.map_confusables
        else:
            kernels = _backend.get_backend(backend)
            self._strip_zero_width = kernels.strip_zero_width
            self._map_confusables = kernels.map_confusables

    def normalize(self, text: str) -> NormalizationResult:
        comp = EditComposer(text)
        for pass_id in self._passes:
            if pass_id == "zero_width":
                _, raw = self._strip_zero_width(comp.text, self._zw, self._zw_non_ascii)
            elif pass_id == "confusables":
                _, raw = self._map_confusables(comp.text, self._by_first, self._table_non_ascii)
            elif pass_id == "insertion_collapse":
                raw = _collapse_edits(
                    comp.text,
                    self._classes,
                    self.config.interior_punct_threshold,
                    self.config.url_detection,
                )
            else:
                raw = _censorship_edits(comp.text, self._classes, self.config.censor_lexicon)
            if raw:
                comp.apply(raw, pass_id)
        return comp.result()


def normalize(text: str, config: NormalizerConfig | None = None) -> NormalizationResult:
    """One-shot convenience wrapper around ``Normalizer``."""
    return Normalizer(config).normalize(text)
