"""Complexes from (1,1)-diagrams of T_{2,2n+1} and twist knots, and their lifts.

A lift to the double branched cover has generators (a_i, b_j) for pairs of
downstairs generators with matching flags: homogeneity for torus knots,
parity of the index for twist knots.  Its Alexander grading is the mean
of the two downstairs gradings and its spin^c class is ``i - j mod p``.
In the class of the spin structure (i = j) the lifted complex copies the
downstairs complex.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .complex_core import Arrow, Generator, KnotComplex, correction_term, make_complex, shift
from .grid import symmetric_residue


@dataclass(frozen=True)
class OneOneComplex:
    """A knot complex on x_1..x_{2n+1} with a flag per generator."""

    family: str
    n: int
    complex: KnotComplex
    flags: Mapping[int, int]

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    @property
    def determinant(self) -> int:
        return 2 * self.n + 1

    def alexander(self, i: int) -> int:
        return self.complex.by_name[f"x{i}"].alexander


@dataclass(frozen=True)
class LiftRow:
    i: int
    j: int
    alexander: Fraction
    spinc_class: int


@dataclass(frozen=True)
class LiftTable:
    p: int
    rows: tuple[LiftRow, ...]

    def by_class(self) -> dict[int, list[LiftRow]]:
        out: dict[int, list[LiftRow]] = defaultdict(list)
        for r in self.rows:
            out[r.spinc_class].append(r)
        return dict(out)


def _graded(alex: Mapping[int, int], arrows: list[tuple[int, int, int]]) -> KnotComplex:
    """Maslov gradings from arrows, thin per component, tower at d = 0.

    Each connected component is graded by propagation with M - A fixed on
    its first generator; all components share that offset and the whole
    complex is then shifted so the correction term vanishes.
    """
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for s, t, m in arrows:
        adj[s].append((t, 2 * m - 1))
        adj[t].append((s, 1 - 2 * m))
    M: dict[int, int] = {}
    for root in sorted(alex):
        if root in M:
            continue
        M[root] = alex[root]
        stack = [root]
        while stack:
            u = stack.pop()
            for v, dm in adj[u]:
                if v in M:
                    if M[v] != M[u] + dm:
                        raise ValueError(f"inconsistent Maslov gradings at x{v}")
                else:
                    M[v] = M[u] + dm
                    stack.append(v)
    K = make_complex(
        [Generator(f"x{i}", alex[i], Fraction(M[i])) for i in sorted(alex)],
        [Arrow(f"x{s}", f"x{t}", m) for s, t, m in arrows],
    )
    return shift(K, 0, -correction_term(K))


def torus_staircase(n: int) -> KnotComplex:
    """Staircase of T_{2,2n+1}: x_i at A = n+1-i, dx_{2i} = x_{2i+1} + U x_{2i-1}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    alex = {i: n + 1 - i for i in range(1, 2 * n + 2)}
    arrows = []
    for i in range(1, n + 1):
        arrows += [(2 * i, 2 * i + 1, 0), (2 * i, 2 * i - 1, 1)]
    return _graded(alex, arrows)


def torus_oneone(n: int) -> OneOneComplex:
    """The (1,1)-diagram complex of T_{2,2n+1}.

    Homogeneous points x_1..x_n sit at A = 2i - n and x_{2n+1} at -n; the
    inhomogeneous x_{n+k} sit at 2k - n - 1 and map to U x_k + x_{k-1},
    with x_{2n+1} standing in for x_0.
    """
    if n < 1:
        raise ValueError("n must be positive")
    alex = {i: 2 * i - n for i in range(1, n + 1)}
    alex[2 * n + 1] = -n
    for k in range(1, n + 1):
        alex[n + k] = 2 * k - n - 1
    arrows = []
    for k in range(1, n + 1):
        arrows.append((n + k, k, 1))
        arrows.append((n + k, k - 1 if k > 1 else 2 * n + 1, 0))
    flags = {i: int(i <= n or i == 2 * n + 1) for i in alex}
    return OneOneComplex("torus", n, _graded(alex, arrows), flags)


def twist_alexander(n: int, i: int) -> int:
    mid = n + 1
    if (i - mid) % 2 == 0:
        return 0
    return 1 if i > mid else -1


def twist_oneone(n: int) -> OneOneComplex:
    """The complex of TW_n on x_1..x_{2n+1}.

    The middle generator x_{n+1} carries the homology: alone when n is
    even, with a trefoil-shaped triangle x_{n+1} -> x_n + U x_{n+2} when n
    is odd.  The rest pairs up into acyclic squares b -> e + U a,
    e -> U c, a -> c spreading outward from the middle.
    """
    if n < 1:
        raise ValueError("n must be positive")
    mid = n + 1
    alex = {i: twist_alexander(n, i) for i in range(1, 2 * n + 2)}
    arrows: list[tuple[int, int, int]] = []
    if n % 2:
        arrows += [(mid, mid - 1, 0), (mid, mid + 1, 1)]
        boxes = [(mid - 1 - 2 * k, mid + 1 + 2 * k, mid - 2 * k, mid + 2 * k) for k in range(1, (n - 1) // 2 + 1)]
    else:
        boxes = [(mid + 1 - 2 * k, mid - 1 + 2 * k, mid - 2 * k, mid + 2 * k) for k in range(1, n // 2 + 1)]
    for e, a, b, c in boxes:
        arrows += [(b, e, 0), (b, a, 1), (e, c, 1), (a, c, 0)]
    flags = {i: i % 2 for i in alex}
    return OneOneComplex("twist", n, _graded(alex, arrows), flags)


def twist_complex(n: int) -> KnotComplex:
    return twist_oneone(n).complex


def oneone(family: str, n: int) -> OneOneComplex:
    if family == "torus":
        return torus_oneone(n)
    if family == "twist":
        return twist_oneone(n)
    raise ValueError(f"unknown family {family!r}")


def lift_table(K: OneOneComplex, p: int | None = None) -> LiftTable:
    """All admissible pairs (i, j) with their Alexander grading and class."""
    p = K.determinant if p is None else p
    rows = []
    idx = range(1, K.size + 1)
    for i in idx:
        for j in idx:
            if K.flags[i] != K.flags[j]:
                continue
            rows.append(LiftRow(i, j, Fraction(K.alexander(i) + K.alexander(j), 2), symmetric_residue(i - j, p)))
    return LiftTable(p, tuple(rows))


def zero_alexander_classes(T: LiftTable) -> list[int]:
    """Classes in which every lifted generator has Alexander grading 0."""
    return sorted(c for c, rows in T.by_class().items() if all(r.alexander == 0 for r in rows))


def lift_s0_complex(K: OneOneComplex) -> KnotComplex:
    """The lift in the spin structure: (a_i, b_i) with the downstairs arrows."""
    C = K.complex
    gens = [Generator(f"a{g.name[1:]}b{g.name[1:]}", g.alexander, g.maslov, 0) for g in C.generators]
    arrows = [Arrow(f"a{a.source[1:]}b{a.source[1:]}", f"a{a.target[1:]}b{a.target[1:]}", a.u_exp) for a in C.arrows]
    return make_complex(gens, arrows)


def twist_alexander_polynomial(n: int) -> dict[int, int]:
    """Symmetric Alexander polynomial of TW_n as {exponent: coefficient}."""
    if n % 2:
        c = (n + 1) // 2
        return {1: c, 0: -n, -1: c}
    c = n // 2
    return {1: -c, 0: n + 1, -1: -c}


def torus_alexander_polynomial(n: int) -> dict[int, int]:
    """Symmetric Alexander polynomial of T_{2,2n+1}."""
    return {k: (-1) ** (n - k) for k in range(-n, n + 1)}


__all__ = [
    "LiftRow", "LiftTable", "OneOneComplex", "lift_s0_complex", "lift_table", "oneone",
    "torus_alexander_polynomial", "torus_oneone", "torus_staircase", "twist_alexander",
    "twist_alexander_polynomial", "twist_complex", "twist_oneone", "zero_alexander_classes",
]
