"""Upsilon invariants: region thresholds, the function t -> Upsilon_t, and tau.

``upsilon_region(K, C)`` is the least s for which the cycles supported in
the translate C_s reach the tower generator in grading d.  For half-planes
H_t the entry time of a term at (A, j) is ``(t/2) A + (1 - t/2) j``, linear in
t, so Upsilon_t is a min-max of finitely many lines and is exactly affine
between pairwise crossings of those lines.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import regions as rg
from .complex_core import (
    CapExceeded,
    KnotComplex,
    as_fraction,
    d_slice,
    enumerate_coset,
    fmt_fraction,
)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Exact piecewise-linear function on [0, 2] given by its breakpoints."""

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        ts = [t for t, _ in self.breakpoints]
        if not ts or ts[0] != 0 or ts[-1] != 2:
            raise ValueError("breakpoints must start at t=0 and end at t=2")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, t: object) -> Fraction:
        t = as_fraction(t)
        if not 0 <= t <= 2:
            raise ValueError(f"t={t} outside [0, 2]")
        pts = self.breakpoints
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[-1][1]

    def slopes(self) -> list[Fraction]:
        pts = self.breakpoints
        return [(v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(pts, pts[1:])]

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        ts = sorted({t for t, _ in self.breakpoints} | {t for t, _ in other.breakpoints})
        return from_samples([(t, self(t) + other(t)) for t in ts])

    def __neg__(self) -> "PiecewiseLinear":
        return PiecewiseLinear(tuple((t, -v) for t, v in self.breakpoints))

    def scale(self, c: object) -> "PiecewiseLinear":
        c = as_fraction(c)
        return from_samples([(t, c * v) for t, v in self.breakpoints])

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.breakpoints)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in self.breakpoints:
            w.writerow([fmt_fraction(t), fmt_fraction(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PiecewiseLinear":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
            raise ValueError("expected header 't,value'")
        return from_samples([(as_fraction(t), as_fraction(v)) for t, v in rows[1:] if t.strip()])


def from_samples(samples: Iterable[tuple[object, object]]) -> PiecewiseLinear:
    """Sort samples and drop interior points lying on the line through their neighbours."""
    pts = sorted((as_fraction(t), as_fraction(v)) for t, v in samples)
    out: list[tuple[Fraction, Fraction]] = []
    for p in pts:
        if out and out[-1][0] == p[0]:
            continue
        while len(out) >= 2:
            (t0, v0), (t1, v1) = out[-2], out[-1]
            if (v1 - v0) * (p[0] - t0) == (p[1] - v0) * (t1 - t0):
                out.pop()
            else:
                break
        out.append(p)
    return PiecewiseLinear(tuple(out))


def zero_function() -> PiecewiseLinear:
    return PiecewiseLinear(((Fraction(0), Fraction(0)), (Fraction(2), Fraction(0))))


def upsilon_region(K: KnotComplex, C: rg.SouthWestRegion) -> Fraction:
    """Least s such that K(C_s) surjects onto the homology in grading d."""
    if not rg.is_normalized(C):
        warnings.warn("region is not normalized; the value is not a concordance invariant", stacklevel=2)
    sl = d_slice(K)
    return sl.minmax([rg.entry_time(C, sl.position(x)) for x in sl.p0])


def upsilon_t(K: KnotComplex, t: object) -> Fraction:
    return -2 * upsilon_region(K, rg.halfplane_t(t))


def _line_crossings(points: Sequence[tuple[int, int]]) -> set[Fraction]:
    """t in (0, 2) where two term lines (t/2) A + (1 - t/2) j meet."""
    out: set[Fraction] = set()
    pts = sorted(set(points))
    # line value = j + t (A - j) / 2, so slopes are (A - j) / 2
    lines = {(Fraction(j), Fraction(a - j, 2)) for a, j in pts}
    lines = sorted(lines)
    for i, (c0, s0) in enumerate(lines):
        for c1, s1 in lines[i + 1:]:
            if s0 != s1:
                t = (c1 - c0) / (s0 - s1)
                if 0 < t < 2:
                    out.add(t)
    return out


def upsilon_function(K: KnotComplex) -> PiecewiseLinear:
    """The exact function t -> Upsilon_t on [0, 2]."""
    sl = d_slice(K)
    up = type(sl)(K, sl.g + 1)
    points = [sl.position(x) for x in sl.p0] + [up.position(x) for x in up.p0]
    ts = sorted(_line_crossings(points) | {Fraction(0), Fraction(2)})
    samples = []
    for t in ts:
        C = rg.halfplane_t(t)
        samples.append((t, -2 * sl.minmax([rg.entry_time(C, sl.position(x)) for x in sl.p0])))
    return from_samples(samples)


def tau(K: KnotComplex) -> Fraction:
    """Negated initial slope of Upsilon."""
    return -upsilon_function(K).slopes()[0]


def upsilon_oracle(K: KnotComplex, C: rg.SouthWestRegion, cap: int = 1 << 16) -> Fraction:
    """Brute force over the whole generator coset."""
    best = None
    for z in enumerate_coset(K, cap):
        v = max(rg.entry_time(C, p) for p in z.positions(K))
        best = v if best is None or v < best else best
    if best is None:  # pragma: no cover - the coset is never empty
        raise CapExceeded("empty coset")
    return best


__all__ = [
    "PiecewiseLinear", "from_samples", "tau", "upsilon_function", "upsilon_oracle",
    "upsilon_region", "upsilon_t", "zero_function",
]
