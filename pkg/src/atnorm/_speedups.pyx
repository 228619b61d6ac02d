# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scanning kernels; mirrors _passes_py exactly.

The hot case is mostly-ASCII text with occasional attack codepoints, so
both kernels run a C-speed scan and only box characters for the set/dict
probes when a codepoint is non-ASCII (or the data contains ASCII sources).
"""

BACKEND = "compiled"


def strip_zero_width(str text, frozenset zero_width, bint non_ascii_only):
    cdef Py_ssize_t i = 0, j, copied = 0, n = len(text)
    cdef Py_UCS4 ch
    if non_ascii_only and text.isascii():
        return text, []
    edits = []
    parts = []
    while i < n:
        ch = text[i]
        if ch < 0x80 and non_ascii_only:
            i += 1
            continue
        if chr(ch) in zero_width:
            j = i + 1
            while j < n:
                ch = text[j]
                if ch < 0x80 and non_ascii_only:
                    break
                if chr(ch) not in zero_width:
                    break
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


def map_confusables(str text, object by_first, bint non_ascii_only):
    cdef Py_ssize_t i = 0, copied = 0, end, n = len(text)
    cdef Py_UCS4 ch
    cdef long cp
    if non_ascii_only and text.isascii():
        return text, []
    edits = []
    parts = []
    while i < n:
        ch = text[i]
        if ch < 0x80 and non_ascii_only:
            i += 1
            continue
        cp = <long>ch
        cands = by_first.get(cp)
        if cands is None:
            i += 1
            continue
        matched = False
        for src, repl in cands:  # longest source first
            if text.startswith(src, i):
                parts.append(text[copied:i])
                parts.append(repl)
                end = i + len(<str>src)
                edits.append((i, end, repl))
                copied = end
                i = end
                matched = True
                break
        if not matched:
            i += 1
    if not edits:
        return text, []
    parts.append(text[copied:])
    return "".join(parts), edits
