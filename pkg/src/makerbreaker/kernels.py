"""Backend selection for the exhaustive-search kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  ``MAKERBREAKER_BACKEND=python`` forces the fallback and
``MAKERBREAKER_BACKEND=cython`` makes a missing extension an ImportError.
Graphs wider than the compiled kernel's 64-bit masks always go to Python.
"""

from __future__ import annotations

import os

from . import _kernels_py

_INT_LIMIT = 1 << 40  # keeps num * |U| inside a signed 64-bit product


def _load_compiled():
    choice = os.environ.get("MAKERBREAKER_BACKEND", "auto").lower()
    if choice == "python":
        return None
    try:
        from . import _kernels
    except ImportError:
        if choice == "cython":
            raise
        return None
    return _kernels


_compiled = _load_compiled()
_active = _compiled if _compiled is not None else _kernels_py
BACKEND: str = _active.NAME


def available_backends() -> dict:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _pick(n: int, *ints: int):
    mod = _active
    if mod.MAX_N is not None and n > mod.MAX_N:
        return _kernels_py
    if mod is not _kernels_py and any(abs(v) >= _INT_LIMIT for v in ints):
        return _kernels_py
    return mod


def expansion_violation(adj, n, smax, num, den, budget, width=None):
    # width: bit width of the masks when only the first n vertices are enumerated
    mod = _pick(max(n, width or 0), num, den)
    return mod.expansion_violation(adj, n, smax, num, den, budget)


def density_violation(adj, n, smax, num, den, budget):
    return _pick(n, num, den).density_violation(adj, n, smax, num, den, budget)


def min_cross(adj, n, r, budget):
    return _pick(n).min_cross(adj, n, r, budget)


def berge_tutte(adj, n):
    return _pick(n).berge_tutte(adj, n)


def longest_path(adj, n, budget):
    return _pick(n).longest_path(adj, n, budget)


def path_longer_than(adj, n, length, budget):
    return _pick(n).path_longer_than(adj, n, length, budget)


def hamilton_cycle(adj, n, budget):
    return _pick(n).hamilton_cycle(adj, n, budget)


def path_bound(adj, n, x, free):
    return _pick(n).path_bound(adj, x, free)
