"""Pure-Python scanning kernels (fallback for the compiled extension).

Both backends must return byte-identical (text, edits) pairs; the parity
suite pins them together.  Edits are pass-local (start, end, replacement)
tuples: zero-width strips report one edit per maximal run, confusable
mapping one edit per matched source sequence.
"""

from __future__ import annotations

BACKEND = "pure"


def strip_zero_width(text: str, zero_width: frozenset, non_ascii_only: bool) -> tuple[str, list]:
    if non_ascii_only and text.isascii():
        return text, []
    edits = []
    parts = []
    copied = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in zero_width:
            j = i + 1
            while j < n and text[j] in zero_width:
                j += 1
            parts.append(text[copied:i])
            edits.append((i, j, ""))
            copied = j
            i = j
        else:
            i += 1
    if not edits:
        return text, []
    parts.append(text[copied:])
    return "".join(parts), edits


def map_confusables(text: str, by_first, non_ascii_only: bool) -> tuple[str, list]:
    if non_ascii_only and text.isascii():
        return text, []
    edits = []
    parts = []
    copied = 0
    i = 0
    n = len(text)
    while i < n:
        cands = by_first.get(ord(text[i]))
        if cands is None:
            i += 1
            continue
        for src, repl in cands:  # longest source first
            if text.startswith(src, i):
                parts.append(text[copied:i])
                parts.append(repl)
                end = i + len(src)
                edits.append((i, end, repl))
                copied = end
                i = end
                break
        else:
            i += 1
    if not edits:
        return text, []
    parts.append(text[copied:])
    return "".join(parts), edits
