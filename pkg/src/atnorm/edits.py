"""Span edits and the bookkeeping that anchors them to the original input.

Every normalization pass reports plain (start, end, replacement) edits
against the text it was given.  ``EditComposer`` rebases those onto the
original input string so the final trace satisfies the replay contract:
applying the edits to the input, in order, reproduces the output exactly,
with non-overlapping spans sorted by start offset.

Offsets are codepoint offsets, never byte offsets.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["Edit", "NormalizationResult", "apply_edits", "EditComposer"]

# A raw pass-local edit: (start, end, replacement) on the pass's own input.
RawEdit = tuple[int, int, str]


@dataclass(frozen=True)
class Edit:
    """One contiguous rewrite of the original input."""

    start: int
    end: int
    replacement: str
    pass_id: str

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "replacement": self.replacement,
            "pass": self.pass_id,
        }

    @staticmethod
    def from_json(obj: dict) -> "Edit":
        return Edit(obj["start"], obj["end"], obj["replacement"], obj["pass"])


@dataclass(frozen=True)
class NormalizationResult:
    text: str
    edits: tuple[Edit, ...]


def apply_edits(source: str, edits: Sequence[Edit]) -> str:
    """Replay a trace; raises ValueError on unsorted or overlapping spans."""
    out = []
    pos = 0
    for e in edits:
        if e.start < pos or e.end < e.start or e.end > len(source):
            raise ValueError(f"edit {e} overlaps a previous edit or exceeds the input")
        out.append(source[pos : e.start])
        out.append(e.replacement)
        pos = e.end
    out.append(source[pos:])
    return "".join(out)


class EditComposer:
    """Tracks how the current working text maps back to the original input.

    The text is held as a list of atoms [src_start, src_end, out_text,
    pass_id]; unchanged atoms start as one per input codepoint and edits
    coalesce the atoms they cover.  An edit that lands partway through an
    earlier replacement widens to that atom's full span, so source spans
    stay exact and contiguous.
    """

    def __init__(self, source: str):
        self.source = source
        self._atoms: list[list] = [[i, i + 1, ch, None] for i, ch in enumerate(source)]
        self._text = source

    @property
    def text(self) -> str:
        return self._text

    def apply(self, raw_edits: Sequence[RawEdit], pass_id: str) -> None:
        """Apply pass-local edits (sorted, non-overlapping, possibly empty)."""
        if not raw_edits:
            return
        atoms = self._atoms
        # Current-text start offset per atom, for locating edit boundaries.
        starts = []
        pos = 0
        for a in atoms:
            starts.append(pos)
            pos += len(a[2])
        if raw_edits[-1][1] > pos:
            raise ValueError("edit exceeds the current text")

        def atom_at(offset: int) -> int:
            # The atom whose current-text span contains ``offset``.  With
            # equal starts (zero-width atoms) bisect lands on the widthful
            # one, keeping prior deletions outside the edit group.
            return bisect_right(starts, offset) - 1

        new_atoms: list[list] = []
        consumed = 0  # atoms fully emitted so far
        k = 0
        while k < len(raw_edits):
            s, e, _ = raw_edits[k]
            if e <= s:
                raise ValueError("passes only delete or replace; empty spans are bugs")
            lo = atom_at(s)
            hi = atom_at(e - 1)
            group = [raw_edits[k]]
            k += 1
            # Later edits landing in an already-covered atom join the group.
            while k < len(raw_edits) and atom_at(raw_edits[k][0]) <= hi:
                ns, ne, nrepl = raw_edits[k]
                group.append((ns, ne, nrepl))
                hi = max(hi, atom_at(ne - 1))
                k += 1
            # Splice the group's edits into the concatenated atom text.
            base = starts[lo]
            chunk = "".join(a[2] for a in atoms[lo : hi + 1])
            spliced = []
            cursor = 0
            for gs, ge, grepl in group:
                spliced.append(chunk[cursor : gs - base])
                spliced.append(grepl)
                cursor = ge - base
            spliced.append(chunk[cursor:])
            new_atoms.extend(atoms[consumed:lo])
            new_atoms.append([atoms[lo][0], atoms[hi][1], "".join(spliced), pass_id])
            consumed = hi + 1
        new_atoms.extend(atoms[consumed:])
        self._atoms = new_atoms
        self._text = "".join(a[2] for a in new_atoms)

    def result(self) -> NormalizationResult:
        """Final text plus the input-anchored trace (adjacent same-pass runs merged)."""
        edits: list[Edit] = []
        for src_start, src_end, out, pid in self._atoms:
            if pid is None:
                continue
            if (
                edits
                and edits[-1].end == src_start
                and edits[-1].pass_id == pid
            ):
                prev = edits[-1]
                edits[-1] = Edit(prev.start, src_end, prev.replacement + out, pid)
            else:
                edits.append(Edit(src_start, src_end, out, pid))
        return NormalizationResult(self._text, tuple(edits))


def validate_raw_edits(raw_edits: Iterable[RawEdit], text_len: int) -> None:
    """Guard helper for pass implementations (used by tests and debug builds)."""
    pos = 0
    for s, e, _ in raw_edits:
        if s < pos or e < s or e > text_len:
            raise ValueError(f"raw edit ({s}, {e}) out of order or out of range")
        pos = e
