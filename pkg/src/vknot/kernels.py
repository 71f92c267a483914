"""Kernel backend selection.

The compiled ``_speedups`` extension is used when it imports and
``VKNOT_PURE_PYTHON`` is unset; otherwise the pure-Python ``_fallback``.
"""

import os

from . import _fallback

BACKEND = "python"
string_matrix = _fallback.string_matrix
canonical_perm = _fallback.canonical_perm

if not os.environ.get("VKNOT_PURE_PYTHON"):
    try:
        from . import _speedups
    except ImportError:
        _speedups = None
    else:
        BACKEND = "cython"
        string_matrix = _speedups.string_matrix
        canonical_perm = _speedups.canonical_perm
else:
    _speedups = None


def backends():
    """Mapping of available backend name -> module, fallback always present."""
    out = {"python": _fallback}
    if _speedups is not None:
        out["cython"] = _speedups
    else:
        try:
            from . import _speedups as ext
        except ImportError:
            pass
        else:
            out["cython"] = ext
    return out
