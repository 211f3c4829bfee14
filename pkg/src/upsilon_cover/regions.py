"""South-west regions of the plane and their diagonal entry times.

A region is a finite union of convex pieces, each an intersection of
half-planes ``a*x + b*y <= c`` with ``a, b >= 0`` and ``a + b > 0``.  Sliding
a point down the diagonal, ``(x - s, y - s)`` enters the half-plane exactly
when ``s >= (a*x + b*y - c) / (a + b)``, which gives closed-form entry times.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complex_core import as_fraction, fmt_fraction


@dataclass(frozen=True)
class HalfPlane:
    """``a*x + b*y <= c``."""

    a: Fraction
    b: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.a < 0 or self.b < 0 or self.a + self.b <= 0:
            raise ValueError(f"half-plane needs a, b >= 0 and a + b > 0, got {self.a}, {self.b}")

    def entry_time(self, x: Fraction, y: Fraction) -> Fraction:
        return (self.a * x + self.b * y - self.c) / (self.a + self.b)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return self.a * x + self.b * y <= self.c


@dataclass(frozen=True)
class SouthWestRegion:
    pieces: tuple[tuple[HalfPlane, ...], ...]

    def __post_init__(self) -> None:
        if not self.pieces or any(not piece for piece in self.pieces):
            raise ValueError("a region needs at least one non-empty piece")

    def entry_time(self, point: Sequence) -> Fraction:
        return entry_time(self, point)

    def contains(self, point: Sequence) -> bool:
        x, y = (as_fraction(v) for v in point)
        return any(all(h.contains(x, y) for h in piece) for piece in self.pieces)

    def translate(self, dx: object, dy: object) -> "SouthWestRegion":
        """The region moved by the vector (dx, dy)."""
        dx, dy = as_fraction(dx), as_fraction(dy)
        return SouthWestRegion(
            tuple(tuple(HalfPlane(h.a, h.b, h.c + h.a * dx + h.b * dy) for h in piece) for piece in self.pieces)
        )


def region(*pieces: Iterable[HalfPlane]) -> SouthWestRegion:
    return SouthWestRegion(tuple(tuple(p) for p in pieces))


def union(*regions: SouthWestRegion) -> SouthWestRegion:
    return SouthWestRegion(tuple(piece for r in regions for piece in r.pieces))


def halfplane_t(t: object) -> SouthWestRegion:
    """H_t as the single constraint ``t*x + (2-t)*y <= 0``; H_2 is {x <= 0}."""
    t = as_fraction(t)
    if not 0 <= t <= 2:
        raise ValueError(f"t must lie in [0, 2], got {t}")
    return region([HalfPlane(t, 2 - t, 0)])


def quadrant(x0: object = 0, y0: object = 0) -> SouthWestRegion:
    """The corner {x <= x0, y <= y0}."""
    return region([HalfPlane(1, 0, x0), HalfPlane(0, 1, y0)])


def entry_time(C: SouthWestRegion, point: Sequence) -> Fraction:
    """Smallest s with ``point - (s, s)`` in C."""
    x, y = (as_fraction(v) for v in point)
    return min(max(h.entry_time(x, y) for h in piece) for piece in C.pieces)


def is_normalized(C: SouthWestRegion) -> bool:
    return entry_time(C, (0, 0)) == 0


def to_dict(C: SouthWestRegion) -> dict:
    return {
        "pieces": [
            [{"a": fmt_fraction(h.a), "b": fmt_fraction(h.b), "c": fmt_fraction(h.c)} for h in piece]
            for piece in C.pieces
        ]
    }


def from_dict(data: Mapping) -> SouthWestRegion:
    return SouthWestRegion(
        tuple(tuple(HalfPlane(h["a"], h["b"], h.get("c", 0)) for h in piece) for piece in data["pieces"])
    )


def parse_region(text: str) -> SouthWestRegion:
    """Parse the ``ht:<t>`` shorthand (``t`` may be ``p/q``)."""
    if text.startswith("ht:"):
        return halfplane_t(text[3:])
    raise ValueError(f"unknown region shorthand {text!r}")
