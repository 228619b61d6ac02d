"""Confusable tables and character classes.

Two kinds of versioned data files live in ``atnorm/data``:

* confusable tables: UTF-8 lines of ``<source codepoints as hex, space
  separated><TAB><replacement literal>``, ``#`` starts a comment.  Example:
  ``1D413\tT`` maps the bold math capital T to ASCII ``T``.
* the character-class file: lines of ``<class name><TAB><hex codepoint>``
  for the zero-width, punctuation and whitespace classes.

Tables are immutable once loaded.  Reversal is table-driven only; nothing
here calls unicodedata at normalize time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Iterable, Mapping

__all__ = [
    "TableError",
    "TableParseError",
    "TableConflictError",
    "TableValidationError",
    "ConfusableTable",
    "CharClassSet",
    "lookup",
    "classify_char",
    "load_table",
    "load_char_classes",
    "merge_tables",
    "builtin_tables",
    "builtin_char_classes",
    "builtin_merged_table",
]


class TableError(ValueError):
    """Base class for data-file problems."""


class TableParseError(TableError):
    """Malformed row; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TableConflictError(TableError):
    """The same source sequence mapped twice."""


class TableValidationError(TableError):
    """Structurally valid row with an illegal value."""


def _is_printable_ascii(s: str) -> bool:
    return all(0x20 <= ord(c) <= 0x7E for c in s)


@dataclass(frozen=True)
class ConfusableTable:
    """A read-only source-sequence -> ASCII replacement mapping.

    ``by_first`` indexes entries by the first codepoint of the source and
    keeps candidates sorted longest-first so position lookups can take the
    longest match without backtracking.
    """

    name: str
    version: str
    entries: Mapping[str, str]
    by_first: Mapping[int, tuple[tuple[str, str], ...]] = field(repr=False)
    max_source_len: int = field(repr=False)
    # True when no source starts with an ASCII codepoint; lets the scan
    # kernels skip ASCII text without probing the table.
    non_ascii_only: bool = field(repr=False, default=True)

    @staticmethod
    def build(name: str, version: str, entries: dict[str, str]) -> "ConfusableTable":
        grouped: dict[int, list[tuple[str, str]]] = {}
        for src, repl in entries.items():
            grouped.setdefault(ord(src[0]), []).append((src, repl))
        by_first = {
            cp: tuple(sorted(cands, key=lambda e: len(e[0]), reverse=True))
            for cp, cands in grouped.items()
        }
        return ConfusableTable(
            name=name,
            version=version,
            entries=MappingProxyType(dict(entries)),
            by_first=MappingProxyType(by_first),
            max_source_len=max((len(s) for s in entries), default=0),
            non_ascii_only=all(cp >= 0x80 for cp in by_first),
        )


def load_table(lines: Iterable[str], name: str = "table") -> ConfusableTable:
    """Parse a confusable table from decoded lines.

    Raises TableParseError (with line number), TableConflictError or
    TableValidationError; a table is either fully loaded or not at all.
    """
    version = "0"
    entries: dict[str, str] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            directive = line[1:].strip()
            if directive.startswith("name:"):
                name = directive[5:].strip() or name
            elif directive.startswith("version:"):
                version = directive[8:].strip() or version
            continue
        if not line.strip():
            continue
        if "\t" not in line:
            raise TableParseError("expected <hex codepoints><TAB><replacement>", line_no)
        hex_part, replacement = line.split("\t", 1)
        cps = hex_part.split()
        if not cps:
            raise TableParseError("empty source sequence", line_no)
        try:
            source = "".join(chr(int(h, 16)) for h in cps)
        except (ValueError, OverflowError):
            raise TableParseError(f"bad hex codepoint in {hex_part!r}", line_no) from None
        if not replacement:
            raise TableParseError("empty replacement", line_no)
        if not _is_printable_ascii(replacement):
            raise TableValidationError(
                f"line {line_no}: replacement {replacement!r} is not printable ASCII"
            )
        if source == replacement:
            raise TableValidationError(f"line {line_no}: source maps to itself")
        if source in entries:
            raise TableConflictError(
                f"line {line_no}: duplicate source {' '.join(cps)} in table {name!r}"
            )
        entries[source] = replacement
    return ConfusableTable.build(name, version, entries)


def merge_tables(tables: Iterable[ConfusableTable]) -> ConfusableTable:
    """Combine tables into one lookup; redefining a source is a conflict."""
    merged: dict[str, str] = {}
    names = []
    for table in tables:
        names.append(table.name)
        for src, repl in table.entries.items():
            if src in merged and merged[src] != repl:
                raise TableConflictError(
                    f"source U+{ord(src[0]):04X}... defined by multiple tables: {names}"
                )
            merged[src] = repl
    return ConfusableTable.build("+".join(names) or "empty", "merged", merged)


def lookup(table: ConfusableTable, text: str, position: int) -> tuple[int, str] | None:
    """Longest source match at ``position``; (matched length, replacement) or None."""
    cands = table.by_first.get(ord(text[position]))
    if not cands:
        return None
    for src, repl in cands:  # longest first
        if text.startswith(src, position):
            return len(src), repl
    return None


@dataclass(frozen=True)
class CharClassSet:
    """Zero-width / punctuation / whitespace codepoint sets (pairwise disjoint)."""

    version: str
    zero_width: frozenset[str]
    punctuation: frozenset[str]
    whitespace: frozenset[str]

    @property
    def zero_width_non_ascii(self) -> bool:
        return all(ord(c) >= 0x80 for c in self.zero_width)

    def __post_init__(self):
        overlap = (
            (self.zero_width & self.punctuation)
            | (self.zero_width & self.whitespace)
            | (self.punctuation & self.whitespace)
        )
        if overlap:
            raise TableValidationError(
                "character classes overlap: "
                + ", ".join(f"U+{ord(c):04X}" for c in sorted(overlap))
            )


_CLASS_NAMES = ("zero_width", "punctuation", "whitespace")


def load_char_classes(lines: Iterable[str]) -> CharClassSet:
    version = "0"
    sets: dict[str, set[str]] = {n: set() for n in _CLASS_NAMES}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            directive = line[1:].strip()
            if directive.startswith("version:"):
                version = directive[8:].strip() or version
            continue
        if not line.strip():
            continue
        if "\t" not in line:
            raise TableParseError("expected <class><TAB><hex codepoint>", line_no)
        cls, hex_cp = line.split("\t", 1)
        if cls not in sets:
            raise TableParseError(f"unknown class {cls!r}", line_no)
        try:
            sets[cls].add(chr(int(hex_cp.strip(), 16)))
        except (ValueError, OverflowError):
            raise TableParseError(f"bad hex codepoint {hex_cp!r}", line_no) from None
    return CharClassSet(
        version=version,
        zero_width=frozenset(sets["zero_width"]),
        punctuation=frozenset(sets["punctuation"]),
        whitespace=frozenset(sets["whitespace"]),
    )


def classify_char(classes: CharClassSet, ch: str) -> str:
    """One of "zero_width", "punctuation", "whitespace", "other"."""
    if ch in classes.zero_width:
        return "zero_width"
    if ch in classes.punctuation:
        return "punctuation"
    if ch in classes.whitespace:
        return "whitespace"
    return "other"


# ---------------------------------------------------------------------------
# Built-in data

_BUILTIN_TABLE_FILES = ("fun_fonts.tsv", "fullwidth.tsv", "enclosed.tsv", "lookalikes.tsv")


def _read_data(filename: str) -> list[str]:
    ref = resources.files("atnorm") / "data" / filename
    return ref.read_text(encoding="utf-8").splitlines()


@lru_cache(maxsize=1)
def builtin_tables() -> tuple[ConfusableTable, ...]:
    return tuple(
        load_table(_read_data(fn), name=fn.rsplit(".", 1)[0]) for fn in _BUILTIN_TABLE_FILES
    )


@lru_cache(maxsize=1)
def builtin_merged_table() -> ConfusableTable:
    return merge_tables(builtin_tables())


@lru_cache(maxsize=1)
def builtin_char_classes() -> CharClassSet:
    return load_char_classes(_read_data("char_classes.tsv"))


def data_path(filename: str) -> str:
    """Filesystem path of a shipped data file."""
    return str(resources.files("atnorm") / "data" / filename)


def load_word_list(path: str) -> tuple[str, ...]:
    """One word per line; blank lines and # comments are ignored."""
    with open(path, encoding="utf-8") as fh:
        return tuple(
            line.strip() for line in fh if line.strip() and not line.lstrip().startswith("#")
        )
