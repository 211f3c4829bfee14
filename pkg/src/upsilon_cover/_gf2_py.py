"""Pure-Python GF(2) elimination on int bitsets (fallback kernel)."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence


def rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of a family of bitset vectors."""
    pivots: dict[int, int] = {}
    r = 0
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = v
                r += 1
                break
            v ^= p
    return r


def nullspace(columns: Sequence[int]) -> List[int]:
    """Basis of {c : XOR of columns[i] over bits i of c is zero}.

    Each returned vector is a bitset over column indices.
    """
    pivots: dict[int, tuple[int, int]] = {}
    out: List[int] = []
    for i, v in enumerate(columns):
        combo = 1 << i
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = (v, combo)
                break
            v ^= p[0]
            combo ^= p[1]
        if not v:
            out.append(combo)
    return out


def solve(columns: Sequence[int], rhs: int) -> Optional[int]:
    """Some combination c with XOR_{i in c} columns[i] == rhs, or None."""
    pivots: dict[int, tuple[int, int]] = {}
    for i, v in enumerate(columns):
        combo = 1 << i
        while v:
            h = v.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = (v, combo)
                break
            v ^= p[0]
            combo ^= p[1]
    combo = 0
    v = rhs
    while v:
        p = pivots.get(v.bit_length() - 1)
        if p is None:
            return None
        v ^= p[0]
        combo ^= p[1]
    return combo
