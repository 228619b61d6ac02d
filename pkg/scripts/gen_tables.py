#!/usr/bin/env python3
"""Regenerate the confusable tables and character-class file in atnorm/data.

The styled-alphabet tables are derived offline from unicodedata's NFKC
mapping, which is the independent oracle for what each styled codepoint
spells; the shipped files are committed so loading never depends on the
interpreter's Unicode version.  Run from the repo root:

    python scripts/gen_tables.py
"""

from __future__ import annotations

import unicodedata
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "atnorm" / "data"


def ascii_alnum(s: str) -> bool:
    return s.isascii() and s.isalnum()


def printable_ascii(s: str) -> bool:
    return s != "" and all(0x20 <= ord(c) <= 0x7E for c in s)


def fmt(source_cps: tuple[int, ...], replacement: str) -> str:
    return " ".join(f"{cp:04X}" for cp in source_cps) + "\t" + replacement


def gen_fun_fonts() -> list[str]:
    # Mathematical Alphanumeric Symbols plus the Letterlike Symbols that fill
    # the reserved holes (italic h, script/fraktur/double-struck letters).
    rows = []
    for cp in range(0x1D400, 0x1D800):
        ch = chr(cp)
        if unicodedata.category(ch) == "Cn":
            continue
        repl = unicodedata.normalize("NFKC", ch)
        if len(repl) == 1 and ascii_alnum(repl):
            rows.append(fmt((cp,), repl))
    for cp in range(0x2100, 0x2150):
        ch = chr(cp)
        if unicodedata.category(ch) == "Cn":
            continue
        repl = unicodedata.normalize("NFKC", ch)
        if len(repl) == 1 and ascii_alnum(repl):
            rows.append(fmt((cp,), repl))
    return rows


def gen_fullwidth() -> list[str]:
    rows = []
    for cp in range(0xFF01, 0xFF5F):
        repl = unicodedata.normalize("NFKC", chr(cp))
        assert repl == chr(cp - 0xFEE0), f"fullwidth offset broke at U+{cp:04X}"
        rows.append(fmt((cp,), repl))
    return rows


def gen_enclosed() -> list[str]:
    # Enclosed Alphanumerics; NFKC yields "1", "A", "(a)", "1." and similar.
    rows = []
    for cp in range(0x2460, 0x2500):
        ch = chr(cp)
        if unicodedata.category(ch) == "Cn":
            continue
        repl = unicodedata.normalize("NFKC", ch)
        if printable_ascii(repl) and repl != ch:
            rows.append(fmt((cp,), repl))
    return rows


# Curated visual look-alikes: Cyrillic, Greek, accented Latin and a few
# symbols.  Kept deliberately moderate; sources must stay non-ASCII so the
# normalizer never rewrites plain leetspeak (Table-2-style behavior).
LOOKALIKES: dict[str, str] = {
    # Cyrillic capitals
    "А": "A", "В": "B", "Е": "E", "З": "3", "К": "K", "М": "M", "Н": "H",
    "О": "O", "Р": "P", "С": "C", "Т": "T", "У": "Y", "Х": "X", "Ѕ": "S",
    "І": "I", "Ј": "J", "Ԛ": "Q", "Ԝ": "W",
    # Cyrillic small
    "а": "a", "е": "e", "о": "o", "р": "p", "с": "c", "у": "y", "х": "x",
    "і": "i", "ѕ": "s", "ј": "j", "ԛ": "q", "ԝ": "w", "г": "r", "ё": "e",
    # Greek capitals
    "Α": "A", "Β": "B", "Ε": "E", "Ζ": "Z", "Η": "H", "Ι": "I", "Κ": "K",
    "Μ": "M", "Ν": "N", "Ο": "O", "Ρ": "P", "Τ": "T", "Υ": "Y", "Χ": "X",
    # Greek small
    "α": "a", "ε": "e", "ι": "i", "κ": "k", "ν": "v", "ο": "o", "ρ": "p",
    "τ": "t", "υ": "u", "ω": "w",
    # Accented Latin (Latin-1 supplement and extended-A picks)
    "À": "A", "Á": "A", "Â": "A", "Ã": "A", "Ä": "A", "Å": "A",
    "È": "E", "É": "E", "Ê": "E", "Ë": "E",
    "Ì": "I", "Í": "I", "Î": "I", "Ï": "I",
    "Ò": "O", "Ó": "O", "Ô": "O", "Õ": "O", "Ö": "O", "Ø": "O",
    "Ù": "U", "Ú": "U", "Û": "U", "Ü": "U", "Ý": "Y", "Ñ": "N", "Ç": "C",
    "à": "a", "á": "a", "â": "a", "ã": "a", "ä": "a", "å": "a",
    "è": "e", "é": "e", "ê": "e", "ë": "e",
    "ì": "i", "í": "i", "î": "i", "ï": "i",
    "ò": "o", "ó": "o", "ô": "o", "õ": "o", "ö": "o", "ø": "o",
    "ù": "u", "ú": "u", "û": "u", "ü": "u", "ý": "y", "ÿ": "y",
    "ñ": "n", "ç": "c", "ā": "a", "ē": "e", "ī": "i", "ō": "o", "ū": "u",
    # Symbols and oddballs
    "¡": "i", "ı": "i", "ƒ": "f", "ℓ": "l",
}


def gen_lookalikes() -> list[str]:
    rows = []
    for src, repl in LOOKALIKES.items():
        assert not src.isascii() and printable_ascii(repl)
        rows.append(fmt(tuple(ord(c) for c in src), repl))
    return rows


ZERO_WIDTH = [
    0x00AD,  # soft hyphen
    0x034F,  # combining grapheme joiner
    0x180E,  # mongolian vowel separator
    0x200B,  # zero width space
    0x200C,  # zero width non-joiner
    0x200D,  # zero width joiner
    0x200E,  # left-to-right mark
    0x200F,  # right-to-left mark
    0x202A, 0x202B, 0x202C, 0x202D, 0x202E,  # bidi embedding controls
    0x2060,  # word joiner
    0x2061, 0x2062, 0x2063, 0x2064,  # invisible operators
    0xFEFF,  # zero width no-break space / BOM
]

WHITESPACE = [
    0x0009, 0x000A, 0x000B, 0x000C, 0x000D, 0x0020, 0x0085, 0x00A0,
    0x1680,
    0x2000, 0x2001, 0x2002, 0x2003, 0x2004, 0x2005, 0x2006, 0x2007,
    0x2008, 0x2009, 0x200A,
    0x2028, 0x2029, 0x202F, 0x205F, 0x3000,
]

# ASCII punctuation; the asterisk used by censorship lives here.
PUNCTUATION = [cp for cp in range(0x21, 0x7F) if not chr(cp).isalnum()]


def gen_char_classes() -> list[str]:
    rows = []
    for cp in ZERO_WIDTH:
        rows.append(f"zero_width\t{cp:04X}")
    for cp in PUNCTUATION:
        rows.append(f"punctuation\t{cp:04X}")
    for cp in WHITESPACE:
        rows.append(f"whitespace\t{cp:04X}")
    return rows


def write(filename: str, name: str, rows: list[str]) -> None:
    header = [f"# name: {name}", "# version: 1"]
    path = DATA / filename
    path.write_text("\n".join(header + rows) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    write("fun_fonts.tsv", "fun_fonts", gen_fun_fonts())
    write("fullwidth.tsv", "fullwidth", gen_fullwidth())
    write("enclosed.tsv", "enclosed", gen_enclosed())
    write("lookalikes.tsv", "lookalikes", gen_lookalikes())
    write("char_classes.tsv", "char_classes", gen_char_classes())


if __name__ == "__main__":
    main()
