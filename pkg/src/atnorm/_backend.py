"""Selects the scanning-kernel backend at import time.

The compiled extension is preferred when present; ATN_PURE_PYTHON=1 forces
the fallback.  Both backends expose the same two functions and are held to
byte-identical outputs by the parity tests.
"""

from __future__ import annotations

import os

from . import _passes_py

_FORCED_PURE = os.environ.get("ATN_PURE_PYTHON") == "1"

if not _FORCED_PURE:
    try:
        from . import _speedups as _active  # type: ignore[attr-defined]
    except ImportError:
        _active = _passes_py
else:
    _active = _passes_py

strip_zero_width = _active.strip_zero_width
map_confusables = _active.map_confusables


def backend_name() -> str:
    return _active.BACKEND


def get_backend(name: str):
    """Explicit backend module for the comparison benchmark."""
    if name == "pure":
        return _passes_py
    if name == "compiled":
        from . import _speedups  # raises ImportError when not built

        return _speedups
    raise ValueError(f"unknown backend {name!r} (expected 'pure' or 'compiled')")


def available_backends() -> list[str]:
    names = ["pure"]
    try:
        from . import _speedups  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("compiled")
    return names
