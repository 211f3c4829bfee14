"""Alexander-filtered, Maslov-graded chain complexes over Z2[U, U^-1].

A complex is a finite set of generators, each with an Alexander grading A,
a rational Maslov grading M and an optional spin^c label, together with a
set of arrows ``x -> U^m y`` (coefficient 1 mod 2).  Every arrow lowers M by
one and respects both filtrations, so the exponent m of an arrow is forced by
the gradings of its ends.  That makes the U=1 collapse of the differential a
faithful GF(2) matrix, and all homological questions below reduce to bitset
linear algebra on one grading at a time.

The basis element ``U^k x`` sits at the planar position ``(A(x) - k, -k)``
and has Maslov grading ``M(x) - 2k``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from . import gf2

Rational = Union[int, Fraction]
SpincLabel = Union[int, tuple, None]


class NotKnotType(ValueError):
    """The complex does not have a single free homology tower."""


class CapExceeded(RuntimeError):
    """A search space is larger than the allowed cap."""


class InvalidComplex(ValueError):
    """Raised when an operation needs a valid complex and got violations."""


def as_fraction(value: object) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not gradings")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def fmt_fraction(value: Rational) -> str:
    q = as_fraction(value)
    return f"{q.numerator}/{q.denominator}"


def _mod2(value: Fraction) -> Fraction:
    return value % 2


def _is_even(value: Fraction) -> bool:
    return value % 2 == 0


def negate_label(label: SpincLabel) -> SpincLabel:
    if label is None:
        return None
    if isinstance(label, tuple):
        return tuple(negate_label(x) for x in label)
    return -label


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True, order=True)
class Generator:
    name: str
    alexander: int
    maslov: Fraction
    spinc: SpincLabel = None


@dataclass(frozen=True, order=True)
class Arrow:
    """``source -> U^u_exp target``."""

    source: str
    target: str
    u_exp: int


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class KnotComplex:
    """Finitely generated bi-filtered complex over Z2[U, U^-1].

    ``tower`` optionally fixes the Maslov class (mod 2) that carries the
    distinguished homology tower.  It is needed for complexes whose homology
    has one tower in each parity (grid slices with two basepoint pairs); the
    other parity is then ignored by the tower invariants.
    """

    generators: tuple[Generator, ...]
    arrows: tuple[Arrow, ...]
    tower: Optional[Fraction] = None

    @cached_property
    def by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    @cached_property
    def out(self) -> dict[str, list[Arrow]]:
        table: dict[str, list[Arrow]] = {g.name: [] for g in self.generators}
        for a in self.arrows:
            table.setdefault(a.source, []).append(a)
        return table

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def __len__(self) -> int:
        return len(self.generators)


def make_complex(
    generators: Iterable[Union[Generator, tuple]],
    arrows: Iterable[Union[Arrow, tuple]],
    tower: Optional[Rational] = None,
) -> KnotComplex:
    """Build a normalized complex; parallel duplicate arrows cancel mod 2."""
    gens = []
    for g in generators:
        if not isinstance(g, Generator):
            g = Generator(*g)
        gens.append(Generator(g.name, int(g.alexander), as_fraction(g.maslov), g.spinc))
    parity: dict[tuple[str, str, int], int] = {}
    for a in arrows:
        if not isinstance(a, Arrow):
            a = Arrow(*a)
        key = (a.source, a.target, int(a.u_exp))
        parity[key] = parity.get(key, 0) ^ 1
    arrs = tuple(sorted(Arrow(*k) for k, v in parity.items() if v))
    gens.sort(key=lambda g: g.name)
    return KnotComplex(tuple(gens), arrs, None if tower is None else _mod2(as_fraction(tower)))


def shift(K: KnotComplex, d_alexander: int = 0, d_maslov: Rational = 0) -> KnotComplex:
    """Translate all gradings of K."""
    dm = as_fraction(d_maslov)
    gens = [Generator(g.name, g.alexander + d_alexander, g.maslov + dm, g.spinc) for g in K.generators]
    tower = None if K.tower is None else K.tower + dm
    return make_complex(gens, K.arrows, tower)


def with_tower(K: KnotComplex, tower: Optional[Rational]) -> KnotComplex:
    return make_complex(K.generators, K.arrows, tower)


# ---------------------------------------------------------------------------
# validation


def validate(K: KnotComplex) -> list[Violation]:
    """All violated complex invariants; empty iff K is a valid complex."""
    out: list[Violation] = []
    seen: set[str] = set()
    for g in K.generators:
        if g.name in seen:
            out.append(Violation("duplicate-generator", g.name))
        seen.add(g.name)
    labels = {repr(g.spinc) for g in K.generators}
    if len(labels) > 1:
        out.append(Violation("spinc", f"mixed labels {sorted(labels)}"))
    idx = K.by_name
    keys: set[tuple[str, str, int]] = set()
    for a in K.arrows:
        tag = f"{a.source} -> U^{a.u_exp} {a.target}"
        if a.source not in idx or a.target not in idx:
            out.append(Violation("unknown-generator", tag))
            continue
        key = (a.source, a.target, a.u_exp)
        if key in keys:
            out.append(Violation("duplicate-arrow", tag))
        keys.add(key)
        x, y = idx[a.source], idx[a.target]
        if a.u_exp < 0:
            out.append(Violation("filtration", f"{tag}: negative U exponent"))
        if y.maslov - 2 * a.u_exp != x.maslov - 1:
            out.append(Violation("maslov", f"{tag}: M drops by {x.maslov - y.maslov + 2 * a.u_exp}"))
        if y.alexander - a.u_exp > x.alexander:
            out.append(Violation("filtration", f"{tag}: raises the Alexander filtration"))
    # d^2 = 0: count two-step paths per (start, end, total exponent)
    counts: dict[tuple[str, str, int], int] = {}
    for a in K.arrows:
        for b in K.out.get(a.target, ()):
            key = (a.source, b.target, a.u_exp + b.u_exp)
            counts[key] = counts.get(key, 0) ^ 1
    for (x, z, m), odd in sorted(counts.items()):
        if odd:
            out.append(Violation("d-squared", f"{x} => U^{m} {z} has an odd path count"))
    return out


def require_valid(K: KnotComplex) -> None:
    bad = validate(K)
    if bad:
        raise InvalidComplex("; ".join(map(str, bad)))


# ---------------------------------------------------------------------------
# grading slices


@dataclass(frozen=True)
class ChainElement:
    """A finite sum of basis elements ``U^k x``, stored as (name, k) terms."""

    terms: frozenset

    def __iter__(self):
        return iter(sorted(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "ChainElement") -> "ChainElement":
        return ChainElement(self.terms ^ other.terms)

    def positions(self, K: KnotComplex) -> list[tuple[int, int]]:
        return [(K.by_name[x].alexander - k, -k) for x, k in self]

    def gradings(self, K: KnotComplex) -> set[Fraction]:
        return {K.by_name[x].maslov - 2 * k for x, k in self}

    def is_homogeneous(self, K: KnotComplex) -> bool:
        return len(self.gradings(K)) <= 1


@dataclass(frozen=True)
class GeneratorCoset:
    base: ChainElement
    boundary_basis: tuple[ChainElement, ...]


class GradingSlice:
    """The chain groups around one Maslov grading g.

    ``p0`` lists generators contributing a term to grading g (and hence also
    to g - 2, g + 2, ...); ``p1`` lists those contributing to g +- 1.  The map
    ``d`` (grading g -> g-1) and ``D`` (grading g+1 -> g) are stored as
    bitset columns in the U=1 collapse.
    """

    def __init__(self, K: KnotComplex, g: Fraction):
        self.K = K
        self.g = g
        self.p0 = [x.name for x in K.generators if _is_even(x.maslov - g)]
        self.p1 = [x.name for x in K.generators if _is_even(x.maslov - g - 1)]
        self.i0 = {x: i for i, x in enumerate(self.p0)}
        self.i1 = {x: i for i, x in enumerate(self.p1)}
        self.d_cols = [0] * len(self.p0)
        self.D_cols = [0] * len(self.p1)
        for a in K.arrows:
            if a.source in self.i0 and a.target in self.i1:
                self.d_cols[self.i0[a.source]] ^= 1 << self.i1[a.target]
            elif a.source in self.i1 and a.target in self.i0:
                self.D_cols[self.i1[a.source]] ^= 1 << self.i0[a.target]
        self.rank_d = gf2.rank(self.d_cols)
        self.rank_D = gf2.rank(self.D_cols)

    def power(self, name: str) -> int:
        """Exponent k of the unique term U^k x of grading g."""
        k = (self.K.by_name[name].maslov - self.g) / 2
        assert k.denominator == 1
        return int(k)

    def position(self, name: str) -> tuple[int, int]:
        k = self.power(name)
        return (self.K.by_name[name].alexander - k, -k)

    @property
    def homology_dim(self) -> int:
        return len(self.p0) - self.rank_d - self.rank_D

    def _survivors(self, allowed: int) -> int:
        """dim of the image in homology of cycles supported on ``allowed``."""
        cols = [c for i, c in enumerate(self.d_cols) if allowed >> i & 1]
        cycles = len(cols) - gf2.rank(cols)
        outside = ~allowed
        bounded = self.rank_D - gf2.rank([c & outside for c in self.D_cols])
        return cycles - bounded

    def minmax(self, values: Sequence[Fraction]) -> Fraction:
        """min over homologically essential cycles of max term value.

        ``values[i]`` is the value attached to the term of ``p0[i]``.  The
        answer is the smallest threshold theta such that a cycle supported
        on terms of value <= theta survives in homology.
        """
        if self.homology_dim < 1:
            raise NotKnotType(f"grading {self.g} carries no homology")
        thresholds = sorted(set(values))
        lo, hi = 0, len(thresholds) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            theta = thresholds[mid]
            mask = sum(1 << i for i, v in enumerate(values) if v <= theta)
            if self._survivors(mask) >= 1:
                hi = mid
            else:
                lo = mid + 1
        return thresholds[lo]

    def element(self, bits: int) -> ChainElement:
        return ChainElement(frozenset((x, self.power(x)) for i, x in enumerate(self.p0) if bits >> i & 1))

    def vector(self, z: ChainElement) -> int:
        out = 0
        for x, _k in z:
            out ^= 1 << self.i0[x]
        return out

    def boundary_basis(self) -> list[int]:
        basis: list[int] = []
        for c in self.D_cols:
            if c and gf2.rank(basis + [c]) > len(basis):
                basis.append(c)
        return basis

    def representative(self, allowed: Optional[int] = None) -> int:
        """A cycle supported on ``allowed`` that is not a boundary."""
        if allowed is None:
            allowed = (1 << len(self.p0)) - 1
        idx = [i for i in range(len(self.p0)) if allowed >> i & 1]
        cols = [self.d_cols[i] for i in idx]
        bound = self.boundary_basis()
        for combo in gf2.nullspace(cols):
            z = 0
            for j, i in enumerate(idx):
                if combo >> j & 1:
                    z |= 1 << i
            if not gf2.in_span(z, bound):
                return z
        raise NotKnotType(f"no essential cycle in grading {self.g}")


def homology_ranks(K: KnotComplex) -> dict[Fraction, int]:
    """Rank over Z2[U, U^-1] of the homology, per Maslov class mod 2."""
    out: dict[Fraction, int] = {}
    for g in K.generators:
        cls = _mod2(g.maslov)
        if cls not in out:
            out[cls] = GradingSlice(K, g.maslov).homology_dim
    return out


def homology_rank(K: KnotComplex) -> int:
    return sum(homology_ranks(K).values())


def tower_class(K: KnotComplex) -> Fraction:
    """Maslov class (mod 2) of the distinguished tower."""
    ranks = homology_ranks(K)
    if K.tower is not None:
        if ranks.get(K.tower, 0) != 1:
            raise NotKnotType(f"designated class {K.tower} has rank {ranks.get(K.tower, 0)}")
        return K.tower
    total = sum(ranks.values())
    if total != 1:
        raise NotKnotType(f"homology has rank {total}, expected 1")
    return next(c for c, r in ranks.items() if r == 1)


def _tower_slice(K: KnotComplex) -> GradingSlice:
    cls = tower_class(K)
    g0 = min(g.maslov for g in K.generators if _mod2(g.maslov) == cls)
    return GradingSlice(K, g0)


def correction_term(K: KnotComplex) -> Fraction:
    """Grading of the top of the homology tower of the sub-complex j <= 0."""
    sl = _tower_slice(K)
    c = sl.minmax([Fraction(sl.position(x)[1]) for x in sl.p0])
    return sl.g - 2 * c


def d_slice(K: KnotComplex) -> GradingSlice:
    """The slice at the correction term grading d."""
    return GradingSlice(K, correction_term(K))


def _coset_extremes(K: KnotComplex, cls: Fraction) -> tuple[Fraction, Fraction]:
    T = with_tower(K, cls)
    sl = GradingSlice(T, correction_term(T))
    pos = [sl.position(x) for x in sl.p0]
    return sl.minmax([Fraction(a) for a, _ in pos]), sl.minmax([Fraction(j) for _, j in pos])


def anchor_balanced(K: KnotComplex, d: Rational = 0) -> KnotComplex:
    """Absolute gradings for a complex with one tower in each Maslov parity.

    Such complexes (grid slices with two basepoints of each kind, fused
    models) double a knot complex.  A is centred at 1/2, the knot tower is
    the one whose coset enters {x <= 0} and {y <= 0} at the same time, and
    M is shifted so that the correction term becomes d.
    """
    total = sum(g.alexander for g in K.generators)
    n = len(K.generators)
    if (n - 2 * total) % (2 * n):
        raise NotKnotType("Alexander gradings cannot be centred at 1/2")
    K = with_tower(shift(K, (n - 2 * total) // (2 * n), 0), None)
    towers = []
    for cls in sorted({_mod2(g.maslov) for g in K.generators}):
        try:
            a_min, j_min = _coset_extremes(K, cls)
        except NotKnotType:
            continue
        if a_min == j_min:
            towers.append(cls)
    if len(towers) != 1:
        raise NotKnotType(f"expected one balanced tower, found {len(towers)}")
    K = with_tower(K, towers[0])
    return shift(K, 0, as_fraction(d) - correction_term(K))


def coset_minmax(K: KnotComplex, value: Callable[[int, int], Fraction]) -> Fraction:
    """min over the generator coset of max over terms of ``value(A, j)``."""
    sl = d_slice(K)
    return sl.minmax([Fraction(value(*sl.position(x))) for x in sl.p0])


def generator_coset(K: KnotComplex) -> GeneratorCoset:
    """A cycle representing the tower generator in grading d, plus boundaries."""
    sl = d_slice(K)
    js = [Fraction(sl.position(x)[1]) for x in sl.p0]
    c = sl.minmax(js)
    allowed = sum(1 << i for i, j in enumerate(js) if j <= c)
    base = sl.representative(allowed)
    bound = tuple(sl.element(b) for b in sl.boundary_basis())
    return GeneratorCoset(sl.element(base), bound)


def v_invariant(K: KnotComplex, m: int) -> Fraction:
    """d(K) - 2 min max(A - m, j) over the generator coset."""
    if m < 0:
        raise ValueError("m must be non-negative")
    d = correction_term(K)
    return d - 2 * coset_minmax(K, lambda a, j: max(a - m, j))


def enumerate_coset(K: KnotComplex, cap: int = 1 << 16) -> Iterable[ChainElement]:
    """Every cycle in the generator coset (brute force, for oracles)."""
    co = generator_coset(K)
    n = len(co.boundary_basis)
    if (1 << n) > cap:
        raise CapExceeded(f"coset has 2^{n} elements, cap is {cap}")
    for mask in range(1 << n):
        z = co.base
        for i, b in enumerate(co.boundary_basis):
            if mask >> i & 1:
                z = z + b
        yield z


def v_invariant_oracle(K: KnotComplex, m: int, cap: int = 1 << 16) -> Fraction:
    """Brute-force V_K(m) by enumerating the whole coset."""
    d = correction_term(K)
    best = min(max(max(a - m, j) for a, j in z.positions(K)) for z in enumerate_coset(K, cap))
    return d - 2 * Fraction(best)


def surgery_d(q: int, m: int, v: Rational) -> Fraction:
    """((q - 2m)^2 - q) / (4q) + v."""
    if q < 1:
        raise ValueError("q must be positive")
    return Fraction((q - 2 * m) ** 2 - q, 4 * q) + as_fraction(v)


# ---------------------------------------------------------------------------
# elimination


def eliminate(K: KnotComplex, rng: Optional[random.Random] = None) -> list[str]:
    """Cancel arrows until none remain; return the surviving generators.

    Every monomial is a unit in Z2[U, U^-1] and the exponent of any entry is
    fixed by the gradings, so the elimination runs on the U=1 collapse.  The
    default order cancels the lexicographically smallest arrow first; an rng
    picks random arrows instead.
    """
    D: dict[str, set[str]] = {g.name: set() for g in K.generators}
    for a in K.arrows:
        D[a.source] ^= {a.target}
    preds: dict[str, set[str]] = {g.name: set() for g in K.generators}
    for x, ys in D.items():
        for y in ys:
            preds[y].add(x)
    while True:
        live = [(x, y) for x in D for y in D[x]]
        if not live:
            break
        x, y = rng.choice(sorted(live)) if rng is not None else min(live)
        rest = D[x] - {y}
        for z in list(preds[y]):
            if z == x:
                continue
            for w in rest:
                if w in D[z]:
                    D[z].discard(w)
                    preds[w].discard(z)
                else:
                    D[z].add(w)
                    preds[w].add(z)
        for gone in (x, y):
            for w in D.pop(gone):
                preds[w].discard(gone)
            for z in preds.pop(gone):
                if z in D:
                    D[z].discard(gone)
    return sorted(D)


def is_acyclic(K: KnotComplex) -> bool:
    return not eliminate(K)


def differential_rank(K: KnotComplex) -> int:
    """GF(2) rank of the U=1 collapse of the differential."""
    pos = {g.name: i for i, g in enumerate(K.generators)}
    cols = [0] * len(K.generators)
    for a in K.arrows:
        cols[pos[a.source]] ^= 1 << pos[a.target]
    return gf2.rank(cols)


# ---------------------------------------------------------------------------
# algebra


def _combine_labels(a: SpincLabel, b: SpincLabel) -> SpincLabel:
    if a is None and b is None:
        return None
    return (a, b)


def _tower_or_none(K: KnotComplex) -> Optional[Fraction]:
    try:
        return tower_class(K)
    except NotKnotType:
        return None


def tensor(K1: KnotComplex, K2: KnotComplex) -> KnotComplex:
    """Tensor product with the Leibniz differential."""
    gens = [
        Generator(f"{x.name}*{y.name}", x.alexander + y.alexander, x.maslov + y.maslov,
                  _combine_labels(x.spinc, y.spinc))
        for x in K1.generators
        for y in K2.generators
    ]
    arrows = []
    for a in K1.arrows:
        for y in K2.generators:
            arrows.append(Arrow(f"{a.source}*{y.name}", f"{a.target}*{y.name}", a.u_exp))
    for b in K2.arrows:
        for x in K1.generators:
            arrows.append(Arrow(f"{x.name}*{b.source}", f"{x.name}*{b.target}", b.u_exp))
    tower = None
    if K1.tower is not None or K2.tower is not None:
        t1, t2 = _tower_or_none(K1), _tower_or_none(K2)
        if t1 is not None and t2 is not None:
            tower = t1 + t2
    return make_complex(gens, arrows, tower)


def _dual_name(name: str) -> str:
    return name[1:] if name.startswith("~") else "~" + name


def dual(K: KnotComplex) -> KnotComplex:
    """The dual complex: gradings negated, arrows reversed."""
    gens = [Generator(_dual_name(g.name), -g.alexander, -g.maslov, negate_label(g.spinc)) for g in K.generators]
    arrows = [Arrow(_dual_name(a.target), _dual_name(a.source), a.u_exp) for a in K.arrows]
    return make_complex(gens, arrows, None if K.tower is None else -K.tower)


def direct_sum(K: KnotComplex, A: KnotComplex, prefix: str = "s:") -> KnotComplex:
    """K plus a summand A; A is relabelled into K's spin^c structure."""
    label = K.generators[0].spinc if K.generators else None
    names = set(K.by_name)
    rename = {g.name: (prefix + g.name if g.name in names else g.name) for g in A.generators}
    gens = list(K.generators) + [Generator(rename[g.name], g.alexander, g.maslov, label) for g in A.generators]
    arrows = list(K.arrows) + [Arrow(rename[a.source], rename[a.target], a.u_exp) for a in A.arrows]
    return make_complex(gens, arrows, K.tower)


def acyclic_box(name: str = "b", alexander: int = 0, maslov: Rational = 0, u_exp: int = 0) -> KnotComplex:
    """The two-generator acyclic complex ``name0 -> U^u name1``."""
    top = as_fraction(maslov)
    return make_complex(
        [Generator(f"{name}0", alexander, top), Generator(f"{name}1", alexander + u_exp, top - 1 + 2 * u_exp)],
        [Arrow(f"{name}0", f"{name}1", u_exp)],
    )


def unknot() -> KnotComplex:
    return make_complex([Generator("z", 0, Fraction(0))], [])


def _arrow_exponent(src: Generator, dst: Generator) -> Optional[int]:
    m = (dst.maslov - src.maslov + 1) / 2
    if m.denominator != 1 or m < 0 or dst.alexander - m > src.alexander:
        return None
    return int(m)


def change_basis(K: KnotComplex, x: str, y: str) -> KnotComplex:
    """Replace x by x + U^k y, where U^k y has the grading of x.

    Gradings are unchanged; in the U=1 collapse this conjugates the
    differential by the elementary matrix, which is its own inverse mod 2.
    """
    gx, gy = K.by_name[x], K.by_name[y]
    k = (gy.maslov - gx.maslov) / 2  # M(U^k y) = M(y) - 2k = M(x)
    if x == y or k.denominator != 1 or k < 0 or gy.alexander - k > gx.alexander:
        raise ValueError(f"{x} + U^k {y} is not a filtered change of basis")
    D: dict[str, set[str]] = {g.name: set() for g in K.generators}
    for a in K.arrows:
        D[a.source] ^= {a.target}
    # new x' = x + y: d(x') = dx + dy, and every occurrence of x in a
    # boundary picks up an occurrence of y with the same coefficient
    D[x] = D[x] ^ D[y]
    for z in D:
        if x in D[z]:
            D[z] ^= {y}
    arrows = []
    for s, targets in D.items():
        for t in targets:
            m = _arrow_exponent(K.by_name[s], K.by_name[t])
            if m is None:  # pragma: no cover - filtered maps compose to filtered maps
                raise InvalidComplex(f"basis change produced an unfiltered arrow {s} -> {t}")
            arrows.append(Arrow(s, t, m))
    return make_complex(K.generators, arrows, K.tower)


def random_knot_complex(rng: random.Random, max_generators: int = 8) -> KnotComplex:
    """A random knot-type complex: a small base, acyclic summands, basis changes."""
    from .oneone import torus_staircase, twist_complex

    bases = [unknot(), torus_staircase(1), dual(torus_staircase(1)), twist_complex(2), torus_staircase(2)]
    K = rng.choice([b for b in bases if len(b) <= max_generators])
    serial = 0
    while len(K) + 2 <= max_generators and rng.random() < 0.7:
        serial += 1
        a = rng.randint(-2, 2)
        m = rng.randint(0, 1)
        top = Fraction(rng.randint(-3, 3))
        if len(K) + 4 <= max_generators and rng.random() < 0.3:
            s = f"q{serial}"
            gens = [
                Generator(f"{s}b", a, top), Generator(f"{s}e", a - 1, top - 1),
                Generator(f"{s}a", a + 1, top + 1), Generator(f"{s}c", a, top),
            ]
            box = make_complex(gens, [
                Arrow(f"{s}b", f"{s}e", 0), Arrow(f"{s}b", f"{s}a", 1),
                Arrow(f"{s}e", f"{s}c", 1), Arrow(f"{s}a", f"{s}c", 0),
            ])
        else:
            drop = rng.randint(0, 2)
            box = make_complex(
                [Generator(f"r{serial}0", a, top), Generator(f"r{serial}1", a + m - drop, top - 1 + 2 * m)],
                [Arrow(f"r{serial}0", f"r{serial}1", m)],
            )
        K = direct_sum(K, box)
    names = K.names
    for _ in range(rng.randint(0, 6)):
        x, y = rng.choice(names), rng.choice(names)
        try:
            K = change_basis(K, x, y)
        except ValueError:
            continue
    return K


# ---------------------------------------------------------------------------
# local equivalence


@dataclass(frozen=True)
class Equivalent:
    forward: Mapping[tuple[str, str], int]
    backward: Mapping[tuple[str, str], int]


@dataclass(frozen=True)
class NoneFound:
    reason: str


def _cycle_detector(K: KnotComplex, sl: GradingSlice) -> int:
    """Bitset phi over sl.p0 vanishing on boundaries and 1 on the tower class."""
    z = sl.representative()
    rows = sl.boundary_basis() + [z]
    cols = [0] * len(sl.p0)
    for r, vec in enumerate(rows):
        for i in range(len(sl.p0)):
            if vec >> i & 1:
                cols[i] |= 1 << r
    phi = gf2.solve(cols, 1 << (len(rows) - 1))
    if phi is None:  # pragma: no cover - z is not a boundary
        raise NotKnotType("tower class is a boundary")
    return phi


def _chain_map(K1: KnotComplex, K2: KnotComplex, d: Fraction, cap: Optional[int]):
    unknowns: list[tuple[str, str]] = []
    for x in K1.generators:
        for y in K2.generators:
            k = (y.maslov - x.maslov) / 2
            if k.denominator == 1 and k >= 0 and y.alexander - k <= x.alexander:
                unknowns.append((x.name, y.name))
    if cap is not None and len(unknowns) > 0 and (1 << len(unknowns)) > cap:
        raise CapExceeded(f"2^{len(unknowns)} candidate maps exceed cap {cap}")
    var = {u: i for i, u in enumerate(unknowns)}
    into2: dict[str, list[str]] = {}
    for b in K2.arrows:
        into2.setdefault(b.target, []).append(b.source)
    eqs: list[int] = []
    for x in K1.generators:
        for y2 in K2.generators:
            if not _is_even(y2.maslov - x.maslov + 1):
                continue
            e = 0
            for y in into2.get(y2.name, ()):
                i = var.get((x.name, y))
                if i is not None:
                    e ^= 1 << i
            for a in K1.out.get(x.name, ()):
                i = var.get((a.target, y2.name))
                if i is not None:
                    e ^= 1 << i
            if e:
                eqs.append(e)
    s1 = GradingSlice(K1, d)
    s2 = GradingSlice(K2, d)
    z1 = s1.representative()
    phi = _cycle_detector(K2, s2)
    hom = 0
    for i1, x in enumerate(s1.p0):
        if not z1 >> i1 & 1:
            continue
        for i2, y in enumerate(s2.p0):
            if phi >> i2 & 1 and (x, y) in var:
                hom ^= 1 << var[(x, y)]
    rows = eqs + [hom]
    cols = [0] * len(unknowns)
    for r, vec in enumerate(rows):
        for i in range(len(unknowns)):
            if vec >> i & 1:
                cols[i] |= 1 << r
    sol = gf2.solve(cols, 1 << (len(rows) - 1))
    if sol is None:
        return None
    return {unknowns[i]: 1 for i in range(len(unknowns)) if sol >> i & 1}


def local_equiv_search(K1: KnotComplex, K2: KnotComplex, size_cap: Optional[int] = 10**6):
    """Look for filtered chain maps both ways inducing homology isomorphisms.

    Chain maps form a GF(2) vector space and the homology condition is an
    affine equation, so the search is an exact linear solve.  The cap bounds
    the naive enumeration space 2^(number of unknown matrix entries) of each
    map; ``None`` disables it.
    """
    d1, d2 = correction_term(K1), correction_term(K2)
    if d1 != d2:
        return NoneFound(f"correction terms differ: {d1} vs {d2}")
    f = _chain_map(K1, K2, d1, size_cap)
    if f is None:
        return NoneFound("no filtered chain map K1 -> K2 is a homology isomorphism")
    g = _chain_map(K2, K1, d1, size_cap)
    if g is None:
        return NoneFound("no filtered chain map K2 -> K1 is a homology isomorphism")
    return Equivalent(f, g)


# ---------------------------------------------------------------------------
# JSON


def _label_to_json(label: SpincLabel):
    if isinstance(label, tuple):
        return [_label_to_json(x) for x in label]
    return label


def _label_from_json(value) -> SpincLabel:
    if isinstance(value, list):
        return tuple(_label_from_json(x) for x in value)
    return value


def to_dict(K: KnotComplex) -> dict:
    out = {
        "generators": [
            {"name": g.name, "A": g.alexander, "M": fmt_fraction(g.maslov), "spinc": _label_to_json(g.spinc)}
            for g in K.generators
        ],
        "arrows": [{"from": a.source, "to": a.target, "m": a.u_exp} for a in K.arrows],
    }
    if K.tower is not None:
        out["tower"] = fmt_fraction(K.tower)
    return out


def from_dict(data: Mapping) -> KnotComplex:
    gens = [
        Generator(str(g["name"]), int(g["A"]), as_fraction(g["M"]), _label_from_json(g.get("spinc")))
        for g in data["generators"]
    ]
    arrows = [Arrow(str(a["from"]), str(a["to"]), int(a["m"])) for a in data["arrows"]]
    tower = data.get("tower")
    return make_complex(gens, arrows, None if tower is None else as_fraction(tower))


def dumps(K: KnotComplex) -> str:
    return json.dumps(to_dict(K), indent=2, sort_keys=True)


def loads(text: str) -> KnotComplex:
    return from_dict(json.loads(text))


__all__ = [
    "Arrow", "ChainElement", "CapExceeded", "Equivalent", "Generator", "GeneratorCoset",
    "GradingSlice", "InvalidComplex", "KnotComplex", "NoneFound", "NotKnotType", "Violation",
    "acyclic_box", "anchor_balanced", "as_fraction", "change_basis", "coset_minmax", "correction_term",
    "differential_rank", "direct_sum", "dual", "dumps", "eliminate", "enumerate_coset", "fmt_fraction",
    "from_dict", "generator_coset", "homology_rank", "homology_ranks", "is_acyclic", "loads",
    "local_equiv_search", "make_complex", "random_knot_complex", "shift", "surgery_d", "tensor",
    "to_dict", "tower_class", "unknot", "v_invariant", "v_invariant_oracle", "validate", "with_tower",
]
