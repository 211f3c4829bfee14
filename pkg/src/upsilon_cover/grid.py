"""Twisted 2 x 2p grid diagrams for the lift of T_{2,p} to L(p,1).

Coordinates: the grid is the strip [0, 2p) x [0, 2) with (0, y) ~ (2p, y)
and (x, 2) ~ (x - 2, 0).  Unit square (i, r) has lower-left vertex (i, r);
the horizontal alpha curves are y = 0, 1 and the vertical beta curves are
the integer x.  A generator picks one intersection on each alpha curve
and one on each beta class:

    x_{a,b} = {(2a, 0), (2b + 1, 1)}      y_{a,b} = {(2a + 1, 0), (2b, 1)}

so there are 2p^2 of them, and ``a + b mod p`` is their spin^c label.  O
markings sit in squares (0, 0) and (1, 1); X markings in (p, 0), (p+1, 1).
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .complex_core import Arrow, Generator, KnotComplex, anchor_balanced, dual, make_complex


class DisconnectedSlice(ValueError):
    """Relative gradings could not be propagated to the whole slice."""


@dataclass(frozen=True)
class TwistedGrid:
    p: int
    o_squares: tuple[tuple[int, int], ...]
    x_squares: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return (self.p - 1) // 2

    @property
    def width(self) -> int:
        return 2 * self.p

    def reduce(self, x: int, y: int) -> tuple[int, int]:
        """Canonical representative of a lattice point or square of the cover."""
        k = y // 2
        return ((x - 2 * k) % self.width, y - 2 * k)


@dataclass(frozen=True, order=True)
class GridGenerator:
    kind: str
    a: int
    b: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.a}_{self.b}"

    def points(self) -> frozenset[tuple[int, int]]:
        if self.kind == "x":
            return frozenset([(2 * self.a, 0), (2 * self.b + 1, 1)])
        return frozenset([(2 * self.a + 1, 0), (2 * self.b, 1)])


@dataclass(frozen=True, order=True)
class GridArrow:
    """``source -> V0^v0 V1^v1 target``; ``nx`` counts X markings crossed."""

    source: GridGenerator
    target: GridGenerator
    v0: int = 0
    v1: int = 0
    nx: int = 0


def build_torus_grid(p: int) -> TwistedGrid:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be odd and at least 3, got {p}")
    return TwistedGrid(p, ((0, 0), (1, 1)), ((p, 0), (p + 1, 1)))


def symmetric_residue(v: int, p: int) -> int:
    r = v % p
    return r - p if r > p // 2 else r


def spinc_of(g: GridGenerator, p: int) -> int:
    return symmetric_residue(g.a + g.b, p)


def generators(G: TwistedGrid) -> list[GridGenerator]:
    return [GridGenerator(k, a, b) for k in ("x", "y") for a in range(G.p) for b in range(G.p)]


def class_generators(G: TwistedGrid, h: int) -> list[GridGenerator]:
    return [g for g in generators(G) if spinc_of(g, G.p) == symmetric_residue(h, G.p)]


# ---------------------------------------------------------------------------
# rectangles


def _interior_hit(G: TwistedGrid, pts: Iterable[tuple[int, int]], x1: int, y1: int, x2: int, y2: int) -> bool:
    for px, py in pts:
        for Y in range(y1 + 1, y2):
            if (Y - py) % 2:
                continue
            k = (Y - py) // 2
            for X in range(x1 + 1, x2):
                if (X - (px + 2 * k)) % G.width == 0:
                    return True
    return False


@lru_cache(maxsize=None)
def _all_rectangles(p: int) -> tuple[GridArrow, ...]:
    G = build_torus_grid(p)
    by_points = {g.points(): g for g in generators(G)}
    o_index = {sq: i for i, sq in enumerate(G.o_squares)}
    xs = set(G.x_squares)
    area_cap = 2 * G.width
    parity: dict[GridArrow, int] = defaultdict(int)
    for g in generators(G):
        pts = sorted(g.points())
        for ll, ur in ((pts[0], pts[1]), (pts[1], pts[0])):
            x1, y1 = ll
            for h in range(1, area_cap + 1):
                for w in range(1, area_cap // h + 1):
                    x2, y2 = x1 + w, y1 + h
                    if G.reduce(x2, y2) != ur:
                        continue
                    squares = [G.reduce(i, j) for i in range(x1, x2) for j in range(y1, y2)]
                    if len(set(squares)) != len(squares):
                        continue
                    new = frozenset([G.reduce(x1, y2), G.reduce(x2, y1)])
                    if len(new) != 2 or new not in by_points:
                        continue
                    if _interior_hit(G, g.points() | new, x1, y1, x2, y2):
                        continue
                    counts = [0, 0]
                    for sq in squares:
                        if sq in o_index:
                            counts[o_index[sq]] += 1
                    nx = sum(1 for sq in squares if sq in xs)
                    parity[GridArrow(g, by_points[new], counts[0], counts[1], nx)] ^= 1
    return tuple(sorted(a for a, v in parity.items() if v))


def rect_differential(G: TwistedGrid) -> list[GridArrow]:
    """Empty embedded rectangles avoiding X, with their O multiplicities."""
    return [a for a in _all_rectangles(G.p) if a.nx == 0]


def filtered_differential(G: TwistedGrid) -> list[GridArrow]:
    """All empty embedded rectangles, including those crossing X markings."""
    return list(_all_rectangles(G.p))


def closed_form_differential(G: TwistedGrid) -> list[GridArrow]:
    """Case-by-case formula for the X-avoiding differential.

    A component index is on the left (L) or right (R) of the X column.
    For x_{a,b}: L = {1..n}, R = {n+1..p-1}; index 0 sits at the O corner
    and takes the side opposite to its partner.  Rows whose components lie
    on one side do not interleave with the markings and carry plain arrows;
    the others pick up one V0 and one V1.  For y_{a,b} the first index uses
    L = {0..n-1}, R = {n+1..p-1} and the second (with 0 read as p) uses
    L = {1..n}, R = {n+2..p}; rows with a = n or b = n+1 have a component
    at the lower-left vertex of an X square and no arrows.
    """
    p, n = G.p, G.n
    mod = lambda v: v % p  # noqa: E731
    X = lambda a, b: GridGenerator("x", mod(a), mod(b))  # noqa: E731
    Y = lambda a, b: GridGenerator("y", mod(a), mod(b))  # noqa: E731
    left, right = set(range(1, n + 1)), set(range(n + 1, p))
    out: list[GridArrow] = []
    for a in range(p):
        for b in range(p):
            src = X(a, b)
            sa = "L" if a in left else ("R" if a in right else None)
            sb = "L" if b in left else ("R" if b in right else None)
            a_targets = [Y(b, a), Y(a - 1, b + 1)]
            b_targets = [Y(a, b), Y(b - 1, a + 1)]
            if sa is not None and sa == sb:
                for t in (a_targets if a <= b else b_targets):
                    out.append(GridArrow(src, t))
                continue
            if sa is None and sb is None:
                sa = "R"
            elif sa is None:
                sa = "R" if sb == "L" else "L"
            t0, t1 = b_targets if sa == "L" else a_targets
            out += [GridArrow(src, t0, 1, 0), GridArrow(src, t1, 0, 1)]
    ly, ry = set(range(0, n)), set(range(n + 1, p))
    lb, rb = set(range(1, n + 1)), set(range(n + 2, p + 1))
    for a in range(p):
        for b in range(p):
            bb = b if b else p
            sa = "L" if a in ly else ("R" if a in ry else None)
            sb = "L" if bb in lb else ("R" if bb in rb else None)
            if sa is None or sb is None:
                continue
            src = Y(a, b)
            p_targets = [X(a, b), X(b, a)]
            q_targets = [X(a + 1, b - 1), X(b - 1, a + 1)]
            if sa == sb:
                out += [GridArrow(src, t) for t in (p_targets if bb > a else q_targets)]
            elif sa == "L":
                out += [GridArrow(src, t, 0, 1) for t in q_targets]
            else:
                out += [GridArrow(src, t, 1, 0) for t in p_targets]
    return sorted(out)


def compare_differentials(G: TwistedGrid) -> tuple[list[GridArrow], list[GridArrow]]:
    """(arrows only in the rectangle count, arrows only in the closed form)."""
    rect, closed = set(rect_differential(G)), set(closed_form_differential(G))
    return sorted(rect - closed), sorted(closed - rect)


def sporadic_generators(G: TwistedGrid, h: int) -> dict[str, GridGenerator]:
    """Generators of class h with a component at the lower-left vertex of a marked square."""
    p, n = G.p, G.n
    h = h % p
    return {
        "O0": GridGenerator("x", 0, h),
        "O1": GridGenerator("x", h, 0),
        "X0": GridGenerator("y", n, (h - n) % p),
        "X1": GridGenerator("y", (h - n - 1) % p, n + 1),
    }


# ---------------------------------------------------------------------------
# lens space correction terms


def lens_d_recursive(p: int, q: int, i: int) -> Fraction:
    """d(L(p, q), i) for 0 <= i < p + q, by the standard continued-fraction recursion."""
    if p == 1:
        return Fraction(0)
    r, j = p % q, i % q
    return Fraction(-1, 4) + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q) - lens_d_recursive(q, r, j)


def lens_d(p: int, h: int) -> Fraction:
    """Correction term of L(p, 1) in the spin^c structure labelled h."""
    if p < 1:
        raise ValueError("p must be positive")
    return lens_d_recursive(p, 1, h % p)


# ---------------------------------------------------------------------------
# slices


def _propagate(nodes: list[str], edges: list[tuple[str, str, int, int]]) -> dict[str, tuple[int, int]]:
    """Relative (A, M) from edges (x, y, dA, dM) meaning gr(y) = gr(x) + (dA, dM)."""
    adj: dict[str, list[tuple[str, int, int]]] = defaultdict(list)
    for x, y, da, dm in edges:
        adj[x].append((y, da, dm))
        adj[y].append((x, -da, -dm))
    gr = {nodes[0]: (0, 0)}
    queue = deque([nodes[0]])
    while queue:
        u = queue.popleft()
        for v, da, dm in adj[u]:
            val = (gr[u][0] + da, gr[u][1] + dm)
            if v in gr:
                if gr[v] != val:
                    raise DisconnectedSlice(f"inconsistent relative gradings at {v}")
            else:
                gr[v] = val
                queue.append(v)
    missing = sorted(set(nodes) - set(gr))
    if missing:
        raise DisconnectedSlice(f"generators {missing[:4]} not reached")
    return gr


def raw_slice(G: TwistedGrid, h: int) -> KnotComplex:
    """Class-h complex with V0 = V1 = U and relative gradings, before anchoring.

    An arrow through v0 + v1 = m O markings and nx X markings is ``x -> U^m y``
    with M(y) = M(x) - 1 + 2m and A(y) = A(x) + m - nx.
    """
    label = symmetric_residue(h, G.p)
    members = {g.name for g in class_generators(G, label)}
    arrows = [a for a in filtered_differential(G) if a.source.name in members]
    gr = _propagate(
        sorted(members),
        [(a.source.name, a.target.name, a.v0 + a.v1 - a.nx, 2 * (a.v0 + a.v1) - 1) for a in arrows],
    )
    gens = [Generator(x, gr[x][0], Fraction(gr[x][1]), label) for x in sorted(members)]
    return make_complex(gens, [Arrow(a.source.name, a.target.name, a.v0 + a.v1) for a in arrows])


def assign_gradings(K: KnotComplex, p: int, h: int) -> KnotComplex:
    """Fix absolute gradings of a relatively graded slice.

    The raw rectangle gradings give the mirror orientation, so the slice is
    dualized first; the result is then anchored at d = lens_d(p, h) with the
    balanced tower (see ``anchor_balanced``).
    """
    D = dual(K)
    label = symmetric_residue(h, p)
    D = make_complex(
        [Generator(g.name[1:], g.alexander, g.maslov, label) for g in D.generators],
        [Arrow(a.source[1:], a.target[1:], a.u_exp) for a in D.arrows],
    )
    return anchor_balanced(D, lens_d(p, h))


def spinc_slice(G: TwistedGrid, h: int) -> KnotComplex:
    """The graded complex of spin^c structure s_0 + h, with 2p generators."""
    if abs(h) > G.n:
        raise ValueError(f"|h| must be at most {G.n}")
    return assign_gradings(raw_slice(G, h), G.p, h)


def outgoing_counts(arrows: Iterable[GridArrow]) -> dict[GridGenerator, int]:
    out: dict[GridGenerator, int] = defaultdict(int)
    for a in arrows:
        out[a.source] += 1
    return dict(out)


__all__ = [
    "DisconnectedSlice", "GridArrow", "GridGenerator", "TwistedGrid", "assign_gradings",
    "build_torus_grid", "class_generators", "closed_form_differential", "compare_differentials",
    "filtered_differential", "generators", "lens_d", "lens_d_recursive", "outgoing_counts",
    "raw_slice", "rect_differential", "spinc_of", "spinc_slice", "sporadic_generators",
    "symmetric_residue",
]
