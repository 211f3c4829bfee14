"""Concordance obstructions from spin^c-refined Upsilon data.

A slice knot has a metabolizer: a subgroup of the first homology of its
branched cover of order sqrt(|H|) on which every twisted Upsilon function
vanishes.  The tools here enumerate candidate metabolizers exhaustively (up
to a cap) and test the vanishing conditions exactly.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import sympy

from .complex_core import CapExceeded, as_fraction
from .upsilon import PiecewiseLinear, from_samples, zero_function

Element = tuple[int, ...]


class NotSquare(UserWarning):
    """The group order is not a perfect square, so no metabolizer exists."""


# ---------------------------------------------------------------------------
# Alexander polynomials and determinants


@dataclass(frozen=True)
class IntLaurentPoly:
    """Integer Laurent polynomial as {exponent: coefficient}."""

    coeffs: Mapping[int, int]

    def __post_init__(self) -> None:
        clean = {int(k): int(v) for k, v in self.coeffs.items() if v}
        object.__setattr__(self, "coeffs", clean)

    @property
    def is_symmetric(self) -> bool:
        return all(self.coeffs.get(-k, 0) == v for k, v in self.coeffs.items())

    def __call__(self, x: object) -> Fraction:
        x = as_fraction(x)
        return sum((c * x**k for k, c in self.coeffs.items()), Fraction(0))

    def shifted_polynomial(self) -> list[int]:
        """Coefficients of t^(-min) * delta, highest degree first."""
        lo, hi = min(self.coeffs), max(self.coeffs)
        return [self.coeffs.get(k, 0) for k in range(hi, lo - 1, -1)]

    def check_knot(self) -> None:
        if not self.is_symmetric:
            raise ValueError("Alexander polynomial must satisfy delta(t) = delta(1/t)")
        if abs(self(1)) != 1:
            raise ValueError("a knot Alexander polynomial has delta(1) = +-1")


def knot_polynomial(coeffs: Mapping[int, int]) -> IntLaurentPoly:
    poly = IntLaurentPoly(coeffs)
    poly.check_knot()
    return poly


def is_prime_power(m: int) -> bool:
    return m > 1 and len(sympy.factorint(m)) == 1


def det_m(delta: IntLaurentPoly, m: int) -> int:
    """|prod over m-th roots of unity of delta|, as an integer resultant."""
    if not is_prime_power(m):
        raise ValueError(f"m must be a prime power, got {m}")
    x = sympy.Symbol("x")
    f = sympy.Poly(x**m - 1, x)
    g = sympy.Poly(delta.shifted_polynomial(), x)
    return abs(int(sympy.resultant(f, g)))


def squarefree_part(n: int) -> int:
    out = 1
    for q, e in sympy.factorint(n).items():
        if e % 2:
            out *= q
    return out


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# finite abelian groups


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The group Z_{n_1} + ... + Z_{n_k}."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if any(n < 1 for n in self.orders):
            raise ValueError("cyclic orders must be positive")

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def zero(self) -> Element:
        return tuple(0 for _ in self.orders)

    def elements(self) -> Iterable[Element]:
        return itertools.product(*(range(n) for n in self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.orders))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % n for a, n in zip(x, self.orders))

    def normalize(self, x: Sequence[int]) -> Element:
        if len(x) != len(self.orders):
            raise ValueError(f"element {x} has the wrong length for {self.orders}")
        return tuple(int(a) % n for a, n in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        out = 1
        for a, n in zip(x, self.orders):
            out = math.lcm(out, n // math.gcd(a, n))
        return out

    def product(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(self.orders + other.orders)


@dataclass(frozen=True)
class Subgroup:
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))


def closure(H: FiniteAbelianGroup, gens: Iterable[Element], base: frozenset = frozenset()) -> frozenset:
    """Subgroup generated by ``base`` (already a subgroup) and ``gens``."""
    out = set(base) or {H.zero}
    for g in gens:
        if g in out:
            continue
        coset_reps = list(out)
        mult = g
        while mult not in out:
            out.update(H.add(mult, r) for r in coset_reps)
            mult = H.add(mult, g)
    return frozenset(out)


def _primary_component(H: FiniteAbelianGroup, q: int) -> list[Element]:
    """Generators of the q-primary part, in the coordinates of H."""
    gens = []
    for i, n in enumerate(H.orders):
        v = 0
        while n % q == 0:
            n //= q
            v += 1
        if v:
            e = [0] * len(H.orders)
            e[i] = H.orders[i] // q**v
            gens.append(tuple(e))
    return gens


def _subgroups_of_order(H: FiniteAbelianGroup, gens: list[Element], target: int, cap: int) -> list[frozenset]:
    ambient = closure(H, gens)
    if len(ambient) > cap:
        raise CapExceeded(f"primary part of order {len(ambient)} exceeds cap {cap}")
    found: set[frozenset] = set()
    seen: set[frozenset] = set()
    frontier = [frozenset([H.zero])]
    elements = sorted(ambient)
    while frontier:
        nxt = []
        for S in frontier:
            if len(S) == target:
                found.add(S)
                continue
            for x in elements:
                if x in S:
                    continue
                T = closure(H, [x], S)
                if target % len(T) == 0 and T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda s: sorted(s))


def subgroups_of_order(H: FiniteAbelianGroup, order: int, cap: int = 10**4) -> list[Subgroup]:
    """All subgroups of H of the given order, built prime by prime."""
    if H.order % order:
        return []
    per_prime: list[list[frozenset]] = []
    for q, e in sorted(sympy.factorint(H.order).items()):
        target = q ** sympy.multiplicity(q, order) if order % q == 0 else 1
        per_prime.append(_subgroups_of_order(H, _primary_component(H, q), target, cap))
    out = []
    for combo in itertools.product(*per_prime):
        S = frozenset([H.zero])
        for part in combo:
            S = frozenset(H.add(x, y) for x in S for y in part)
        out.append(Subgroup(S))
    return out


def square_root_subgroups(H: FiniteAbelianGroup, cap: int = 10**4) -> list[Subgroup]:
    """Subgroups of order sqrt(|H|); warns NotSquare and returns [] if none can exist."""
    if not is_square(H.order):
        warnings.warn(f"group order {H.order} is not a square", NotSquare, stacklevel=2)
        return []
    return subgroups_of_order(H, math.isqrt(H.order), cap)


# ---------------------------------------------------------------------------
# Upsilon maps and obstructions


@dataclass(frozen=True)
class UpsilonMap:
    """Upsilon functions indexed by group elements, symmetric under negation."""

    group: FiniteAbelianGroup
    values: Mapping[Element, PiecewiseLinear]

    def __post_init__(self) -> None:
        filled: dict[Element, PiecewiseLinear] = {}
        for k, v in self.values.items():
            filled[self.group.normalize(k)] = v
        for k, v in list(filled.items()):
            nk = self.group.neg(k)
            if nk in filled and filled[nk] != v:
                raise ValueError(f"conjugation symmetry fails at {k}")
            filled.setdefault(nk, v)
        object.__setattr__(self, "values", filled)

    def __getitem__(self, x: Sequence[int]) -> PiecewiseLinear:
        return self.values[self.group.normalize(x)]

    def is_total(self) -> bool:
        return all(x in self.values for x in self.group.elements())

    def __add__(self, other: "UpsilonMap") -> "UpsilonMap":
        """The map of the connected sum on the product group."""
        G = self.group.product(other.group)
        k = len(self.group.orders)
        return UpsilonMap(G, {x: self[x[:k]] + other[x[k:]] for x in G.elements()})


def cyclic_upsilon_map(p: int, by_class: Mapping[int, PiecewiseLinear]) -> UpsilonMap:
    return UpsilonMap(FiniteAbelianGroup((p,)), {(h % p,): f for h, f in by_class.items()})


def upsilon_map_from_json(data: Mapping) -> UpsilonMap:
    G = FiniteAbelianGroup(tuple(data["group"]))
    values = {}
    for key, pts in data["upsilon"].items():
        elem = tuple(int(s) for s in str(key).strip("[]() ").split(",") if s.strip())
        values[elem] = from_samples((as_fraction(t), as_fraction(v)) for t, v in pts)
    return UpsilonMap(G, values)


def upsilon_map_to_json(U: UpsilonMap) -> str:
    from .complex_core import fmt_fraction

    return json.dumps(
        {
            "group": list(U.group.orders),
            "upsilon": {
                ",".join(map(str, k)): [[fmt_fraction(t), fmt_fraction(v)] for t, v in f.breakpoints]
                for k, f in sorted(U.values.items())
            },
        },
        indent=2,
        sort_keys=True,
    )


@dataclass(frozen=True)
class PassesWith:
    subgroup: Subgroup


@dataclass(frozen=True)
class Obstructed:
    reason: str


def _check_total(U: UpsilonMap, H: FiniteAbelianGroup) -> None:
    if U.group != H:
        raise ValueError("Upsilon map and group disagree")
    if not U.is_total():
        raise ValueError("Upsilon map must be defined on every element")


def slice_obstruction(U: UpsilonMap, H: FiniteAbelianGroup, cap: int = 10**4):
    """PassesWith(G) for a metabolizer candidate G with vanishing Upsilon, else Obstructed."""
    _check_total(U, H)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotSquare)
        candidates = square_root_subgroups(H, cap)
    if not is_square(H.order):
        return Obstructed(f"|H| = {H.order} is not a square")
    for G in candidates:
        if all(U[x].is_zero() for x in G):
            return PassesWith(G)
    return Obstructed(f"none of the {len(candidates)} subgroups of order {math.isqrt(H.order)} has vanishing Upsilon")


def concordance_test(U1: UpsilonMap, U2: UpsilonMap, H1: FiniteAbelianGroup, H2: FiniteAbelianGroup, cap: int = 10**4):
    """Look for G in H1 x H2 of order sqrt(|H1||H2|) with U1(x) = U2(y) on G."""
    _check_total(U1, H1)
    _check_total(U2, H2)
    H = H1.product(H2)
    if not is_square(H.order):
        return Obstructed(f"|H1||H2| = {H.order} is not a square")
    k = len(H1.orders)
    for G in square_root_subgroups(H, cap):
        if all(U1[x[:k]] == U2[x[k:]] for x in G):
            return PassesWith(G)
    return Obstructed("no subgroup of the right order matches the Upsilon functions")


@dataclass(frozen=True)
class Zero:
    note: str = ""


@dataclass(frozen=True)
class NonzeroWitness:
    value: Fraction
    sums: tuple[Fraction, ...] = field(default=())


def finite_order_S(U: UpsilonMap, p: int, t: object):
    """Decide whether S_t(K, p) vanishes.

    S_t is the minimum of |sum n_H v_H| over non-negative n_H not all zero,
    where v_H sums Upsilon_xi(t) over an order-p subgroup H.  It is zero iff
    some v_H is zero or two have opposite signs; otherwise it is min |v_H|.
    """
    if not sympy.isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    t = as_fraction(t)
    H = U.group
    if not U.is_total():
        raise ValueError("Upsilon map must be defined on every element")
    subs: set[frozenset] = set()
    for x in H.elements():
        if H.element_order(x) == p:
            subs.add(frozenset(H.scale(k, x) for k in range(p)))
    if not subs:
        warnings.warn(f"no subgroup of order {p}; S_t vanishes vacuously", stacklevel=2)
        return Zero("no subgroup of order p")
    sums = tuple(sorted(sum((U[x](t) for x in S), Fraction(0)) for S in subs))
    if any(v == 0 for v in sums) or (min(sums) < 0 < max(sums)):
        return Zero()
    return NonzeroWitness(min(abs(v) for v in sums), sums)


# ---------------------------------------------------------------------------
# independence of alternating torus knots


def independence_H(xi_components: Sequence[Sequence[int]], a: Sequence[int], b: Sequence[int]) -> Fraction:
    """H = sum a_i |xi_i^+| - sum b_j |xi_j^-| for xi = (plus, minus)."""
    if len(xi_components) != 2:
        raise ValueError("xi must be a pair (plus components, minus components)")
    plus, minus = xi_components
    if len(plus) != len(a) or len(minus) != len(b):
        raise ValueError("components and coefficients are misaligned")
    return Fraction(sum(ai * abs(x) for ai, x in zip(a, plus)) - sum(bj * abs(y) for bj, y in zip(b, minus)))


@dataclass(frozen=True)
class RelationVerdict:
    coefficients: tuple[int, ...]
    reason: str
    witnesses: int = 0

    @property
    def rejected(self) -> bool:
        return self.reason != "not rejected"


def _symmetric_abs(v: int, n: int) -> int:
    r = v % n
    return min(r, n - r)


def check_torus_relation(ps: Sequence[int], coeffs: Sequence[int], cap: int = 10**4) -> RelationVerdict:
    """Try to rule out sum c_i T_{2,p_i} = 0 with the tau-of-lifts argument.

    Every copy of T_{2,p} contributes a Z_p summand, and twisting its lift by
    xi gives tau = n - |xi|.  A relation survives only if the group order is
    a square and some metabolizer M has H(xi) = 0 for every xi in M.
    """
    coeffs = tuple(coeffs)
    orders: list[int] = []
    signs: list[int] = []
    for p, c in zip(ps, coeffs):
        orders += [p] * abs(c)
        signs += [1 if c > 0 else -1] * abs(c)
    H = FiniteAbelianGroup(tuple(orders))
    if not is_square(H.order):
        return RelationVerdict(coeffs, "determinant is not a square")
    plus = [i for i, s in enumerate(signs) if s > 0]
    minus = [i for i, s in enumerate(signs) if s < 0]

    def h_value(x: Element) -> Fraction:
        comps = (
            [_symmetric_abs(x[i], orders[i]) for i in plus],
            [_symmetric_abs(x[i], orders[i]) for i in minus],
        )
        return independence_H(comps, [1] * len(plus), [1] * len(minus))

    metabolizers = square_root_subgroups(H, cap)
    for M in metabolizers:
        # prefer a witness supported on the positive side
        pure = [x for x in M if any(x) and all(x[i] == 0 for i in minus)]
        pool = pure or [x for x in M if any(x)]
        if not any(h_value(x) != 0 for x in pool):
            return RelationVerdict(coeffs, "not rejected")
    return RelationVerdict(coeffs, "every metabolizer has a nonzero H witness", len(metabolizers))


def torus_independence_driver(ps: Sequence[int] = (3, 5, 7), bound: int = 3, cap: int = 10**4) -> list[RelationVerdict]:
    """Check every nonzero relation with |c_i| <= bound, up to overall sign."""
    out = []
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(ps)):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] < 0:
            continue
        out.append(check_torus_relation(ps, coeffs, cap))
    return out


def torus_det_bound(n: int, det_K: int) -> bool:
    """Necessary condition for a knot of determinant det_K to be concordant to T_{2,2n+1}."""
    if n < 1 or det_K < 1:
        raise ValueError("need n >= 1 and det_K >= 1")
    p = 2 * n + 1
    return Fraction(det_K) > Fraction(p, 4) and squarefree_part(det_K) == squarefree_part(p)


def group_order_matches(H: FiniteAbelianGroup, delta: IntLaurentPoly, m: int = 2) -> bool:
    """Does |H| agree with det_m of the polynomial?"""
    return H.order == det_m(delta, m)


__all__ = [
    "FiniteAbelianGroup", "IntLaurentPoly", "NonzeroWitness", "NotSquare", "Obstructed", "PassesWith",
    "RelationVerdict", "Subgroup", "UpsilonMap", "Zero", "check_torus_relation", "closure",
    "concordance_test", "cyclic_upsilon_map", "det_m", "finite_order_S", "group_order_matches",
    "independence_H", "is_prime_power", "is_square", "knot_polynomial", "slice_obstruction",
    "square_root_subgroups", "squarefree_part", "subgroups_of_order", "torus_det_bound",
    "torus_independence_driver", "upsilon_map_from_json", "upsilon_map_to_json", "zero_function",
]
