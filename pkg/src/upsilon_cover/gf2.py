"""GF(2) linear algebra on int bitsets.

The compiled kernel is used when it was built; otherwise the pure-Python
fallback is selected at import. Setting UPSILON_COVER_PURE=1 forces the
fallback.
"""

from __future__ import annotations

import os

from . import _gf2_py

if os.environ.get("UPSILON_COVER_PURE"):
    _impl = _gf2_py
else:
    try:
        from . import _gf2_ext as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _gf2_py

BACKEND = "cython" if _impl is not _gf2_py else "python"

rank = _impl.rank
nullspace = _impl.nullspace
solve = _impl.solve


def in_span(vec: int, basis: list[int]) -> bool:
    return rank(basis + [vec]) == rank(basis)


__all__ = ["BACKEND", "rank", "nullspace", "solve", "in_span"]
