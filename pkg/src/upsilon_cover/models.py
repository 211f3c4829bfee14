"""Model complexes: electric poles, wires and their fusions C[e, w].

The layout is fixed in the orientation of the rectangle count and then
dualized, so that the models sit in the same orientation as the grid
slices.  In the rectangle orientation (arrows raise A and M by one when
they carry a V, and keep A while lowering M by one when plain):

* a wire of length w has levels k = 0..w, each a pair (a_k, b_k) at
  (A, M) = (k, k).  From an even level every generator maps to
  ``V0 a_{k+1} + V1 b_{k+1}``; from an odd level ``a_k`` maps to
  ``V1 (a_{k+1} + b_{k+1})`` and ``b_k`` to ``V0 (a_{k+1} + b_{k+1})``;
* a pole of height e is an apex over e pairs, all at one Alexander
  degree with M dropping by one per row; the apex hits both generators of
  the first pair and every pair hits both generators of the next one;
* C[e, w] glues the bottom pair of one pole to wire level 0 and the bottom
  pair of another to level w.  For e = 0 the end levels collapse to single
  generators and parallel arrows cancel mod 2.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .complex_core import Arrow, Generator, KnotComplex, make_complex

PLAIN, V0, V1 = "1", "V0", "V1"
_LABELS = (PLAIN, V0, V1)


class LabelOverflow(ValueError):
    """A basis change produced a coefficient outside {1, V0, V1}."""


@dataclass(frozen=True, order=True)
class ModelGenerator:
    name: str
    alexander: int
    maslov: int
    role: str = "wire"  # wire | pole | apex

    @property
    def position(self) -> tuple[int, int]:
        """(A, M) coordinates in the plane of the figures."""
        return (self.alexander, self.maslov)


@dataclass(frozen=True, order=True)
class ModelArrow:
    source: str
    target: str
    label: str = PLAIN

    @property
    def u_exp(self) -> int:
        return 0 if self.label == PLAIN else 1


@dataclass(frozen=True)
class ModelComplex:
    kind: str
    e: int
    w: int
    generators: tuple[ModelGenerator, ...]
    arrows: tuple[ModelArrow, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def to_knot_complex(self, label: Optional[int] = None) -> KnotComplex:
        """Specialize V0 = V1 = U; parallel V0 + V1 arrows cancel."""
        return make_complex(
            [Generator(g.name, g.alexander, Fraction(g.maslov), label) for g in self.generators],
            [Arrow(a.source, a.target, a.u_exp) for a in self.arrows],
        )


_Diff = dict[str, dict[str, set]]


def _build(kind: str, e: int, w: int, gens: dict[str, tuple[int, int, str]], diff: _Diff) -> ModelComplex:
    """Dualize a raw layout into the knot orientation."""
    mg = tuple(sorted(ModelGenerator(n, -a, -m, role) for n, (a, m, role) in gens.items()))
    ma = tuple(
        sorted(ModelArrow(t, s, lab) for s, row in diff.items() for t, labs in row.items() for lab in labs)
    )
    return ModelComplex(kind, e, w, mg, ma)


def _add(diff: _Diff, s: str, t: str, label: str) -> None:
    diff[s][t] ^= {label}


def _raw_wire(w: int, collapse_ends: bool, gens: dict, diff: _Diff, a_off: int = 0, m_off: int = 0) -> list[list[str]]:
    levels: list[list[str]] = []
    for k in range(w + 1):
        if collapse_ends and k in (0, w):
            names = [f"w{k}"]
        else:
            names = [f"w{k}a", f"w{k}b"]
        for nm in names:
            gens[nm] = (k + a_off, k + m_off, "wire")
        levels.append(names)
    for k in range(w):
        cur, nxt = levels[k], levels[k + 1]
        na, nb = nxt[0], nxt[-1]
        for idx, s in enumerate(cur):
            if k % 2 == 0:
                _add(diff, s, na, V0)
                _add(diff, s, nb, V1)
            else:
                # odd levels are never collapsed; a collapsed target cancels mod 2
                lab = V1 if idx == 0 else V0
                _add(diff, s, na, lab)
                _add(diff, s, nb, lab)
    return levels


def _raw_pole(prefix: str, e: int, alexander: int, bottom_m: int, bottom: list[str], gens: dict, diff: _Diff) -> None:
    """Apex and pairs above ``bottom`` (already present, at M = bottom_m)."""
    rows: list[list[str]] = []
    for i in range(e - 1):
        m = bottom_m + e - 1 - i
        pair = [f"{prefix}{i + 1}a", f"{prefix}{i + 1}b"]
        for nm in pair:
            gens[nm] = (alexander, m, "pole")
        rows.append(pair)
    rows.append(bottom)
    apex = f"{prefix}0"
    gens[apex] = (alexander, bottom_m + e, "apex")
    for t in rows[0]:
        _add(diff, apex, t, PLAIN)
    for upper, lower in zip(rows, rows[1:]):
        for s in upper:
            for t in lower:
                _add(diff, s, t, PLAIN)


def _new_diff() -> _Diff:
    return defaultdict(lambda: defaultdict(set))


def make_pole(e: int) -> ModelComplex:
    if e < 0:
        raise ValueError("pole height must be non-negative")
    gens: dict[str, tuple[int, int, str]] = {}
    diff = _new_diff()
    if e == 0:
        gens["P0"] = (0, 0, "apex")
    else:
        bottom = ["Pba", "Pbb"]
        for nm in bottom:
            gens[nm] = (0, 0, "pole")
        _raw_pole("P", e, 0, 0, bottom, gens, diff)
    return _build("pole", e, 0, gens, diff)


def make_wire(w: int) -> ModelComplex:
    if w < 1:
        raise ValueError("wire length must be positive")
    gens: dict[str, tuple[int, int, str]] = {}
    diff = _new_diff()
    _raw_wire(w, False, gens, diff)
    return _build("wire", 0, w, gens, diff)


def make_fused(e: int, w: int) -> ModelComplex:
    """C[e, w]: a wire of length w with a pole of height e at each end."""
    if e < 0 or w < 1:
        raise ValueError("need e >= 0 and w >= 1")
    gens: dict[str, tuple[int, int, str]] = {}
    diff = _new_diff()
    levels = _raw_wire(w, e == 0, gens, diff)
    if e > 0:
        _raw_pole("L", e, 0, 0, levels[0], gens, diff)
        _raw_pole("R", e, w, w, levels[w], gens, diff)
    return _build("fused", e, w, gens, diff)


# ---------------------------------------------------------------------------
# pole shortening


def _mul(x: str, y: str) -> str:
    if x == PLAIN:
        return y
    if y == PLAIN:
        return x
    raise LabelOverflow(f"product {x}*{y} is not a single V label")


def _to_diff(M: ModelComplex) -> _Diff:
    diff = _new_diff()
    for a in M.arrows:
        _add(diff, a.source, a.target, a.label)
    return diff


def _cancel(diff: _Diff, gens: dict, x: str, y: str) -> None:
    """Cancel the unit arrow x -> y with the zig-zag update."""
    into_y = [(z, set(row[y])) for z, row in diff.items() if y in row and row[y] and z != x]
    rest = {t: set(labs) for t, labs in diff[x].items() if t != y and labs}
    for z, gammas in into_y:
        for t, deltas in rest.items():
            for g in gammas:
                for d in deltas:
                    _add(diff, z, t, _mul(g, d))
    for gone in (x, y):
        diff.pop(gone, None)
        gens.pop(gone, None)
        for row in diff.values():
            row.pop(gone, None)


def reduce_step(M: ModelComplex) -> ModelComplex:
    """Lower both poles of C[e, w] by one.

    At each apex c with neighbours N1, N2, replace N2 by N2' = N1 + N2.
    An arrow z -> a N1 + b N2 becomes z -> (a + b) N1 + b N2', and N2'
    inherits the sum of the two differentials.  Exactly one unit arrow
    then joins c to the pair; cancelling it removes c together with one
    of N1, N2', and the survivor becomes the new apex.
    """
    if M.kind != "fused" or M.e < 1:
        raise ValueError("reduce_step needs a fused complex with e >= 1")
    gens = {g.name: g for g in M.generators}
    diff = _to_diff(M)
    for apex in sorted(n for n, g in gens.items() if g.role == "apex"):
        nbrs = sorted(
            {t for t, labs in diff[apex].items() if PLAIN in labs}
            | {z for z, row in diff.items() if PLAIN in row.get(apex, ())}
        )
        if len(nbrs) != 2:
            raise ValueError(f"apex {apex} has {len(nbrs)} neighbours")
        n1, n2 = nbrs
        n2p = f"({n1}+{n2})"
        # new basis element n2p = n1 + n2
        new_row = defaultdict(set)
        for src in (n1, n2):
            for t, labs in diff[src].items():
                for lab in labs:
                    new_row[t] ^= {lab}
        for z, row in list(diff.items()):
            if z in (n1, n2):
                continue
            b = set(row.get(n2, ()))
            if b:
                row[n1] = set(row.get(n1, set())) ^ b
                row[n2p] = b
                row.pop(n2)
        diff.pop(n2)
        diff[n2p] = new_row
        for row in diff.values():
            row.pop(n2, None)
        g2 = gens.pop(n2)
        gens[n2p] = ModelGenerator(n2p, g2.alexander, g2.maslov, g2.role)
        # cancel the unit arrow joining the apex to the pair
        pair = [n1, n2p]
        links = [(apex, t) for t in pair if PLAIN in diff[apex].get(t, ())]
        links += [(t, apex) for t in pair if PLAIN in diff[t].get(apex, ())]
        if len(links) != 1:
            raise ValueError(f"apex {apex} does not have a single unit link after the basis change")
        x, y = links[0]
        survivor = n2p if n1 in (x, y) else n1
        _cancel(diff, gens, x, y)
        if M.e > 1:
            g = gens[survivor]
            gens[survivor] = ModelGenerator(g.name, g.alexander, g.maslov, "apex")
    arrows = tuple(sorted(ModelArrow(s, t, lab) for s, row in diff.items() for t, labs in row.items() for lab in labs))
    for a in arrows:
        if a.label not in _LABELS:
            raise LabelOverflow(a.label)
    return ModelComplex("fused", M.e - 1, M.w, tuple(sorted(gens.values())), arrows)


def reduce_to_base(M: ModelComplex) -> ModelComplex:
    while M.e > 0:
        M = reduce_step(M)
    return M


# ---------------------------------------------------------------------------
# graded isomorphism


@dataclass(frozen=True)
class IsoWitness:
    mapping: dict[str, str]
    shift_alexander: int
    shift_maslov: Fraction


_Graded = tuple[dict[str, tuple[int, Fraction]], set[tuple[str, str, object]]]


def _graded_of(obj: Union[ModelComplex, KnotComplex], associated: bool) -> _Graded:
    if isinstance(obj, ModelComplex):
        obj = obj.to_knot_complex()
    gr = {g.name: (g.alexander, Fraction(g.maslov)) for g in obj.generators}
    arrows = set()
    for a in obj.arrows:
        if associated and gr[a.target][0] - a.u_exp != gr[a.source][0]:
            continue
        arrows.add((a.source, a.target, a.u_exp))
    return gr, arrows


def graded_iso(left: _Graded, right: _Graded) -> Optional[IsoWitness]:
    """Bijection matching bidegrees up to one global shift and all arrows."""
    gl, al = left
    gr, ar = right
    if len(gl) != len(gr) or len(al) != len(ar):
        return None
    if not gl:
        return IsoWitness({}, 0, Fraction(0))
    sa = min(a for a, _ in gr.values()) - min(a for a, _ in gl.values())
    sm = min(m for _, m in gr.values()) - min(m for _, m in gl.values())
    deg = lambda gens, arrows: {  # noqa: E731
        x: (sum(1 for s, _, _ in arrows if s == x), sum(1 for _, t, _ in arrows if t == x)) for x in gens
    }
    dl, dr = deg(gl, al), deg(gr, ar)
    key_l = {x: (gl[x][0] + sa, gl[x][1] + sm, dl[x]) for x in gl}
    key_r = {y: (gr[y][0], gr[y][1], dr[y]) for y in gr}
    buckets: dict[tuple, list[str]] = defaultdict(list)
    for y in sorted(gr):
        buckets[key_r[y]].append(y)
    if sorted(map(repr, key_l.values())) != sorted(map(repr, key_r.values())):
        return None
    out_l: dict[str, list[tuple[str, object]]] = defaultdict(list)
    in_l: dict[str, list[tuple[str, object]]] = defaultdict(list)
    for s, t, m in al:
        out_l[s].append((t, m))
        in_l[t].append((s, m))
    # visit generators in a connected order so constraints bite early
    order: list[str] = []
    seen: set[str] = set()
    for root in sorted(gl, key=lambda x: (len(buckets[key_l[x]]), x)):
        stack = [root]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            order.append(x)
            stack.extend(sorted({t for t, _ in out_l[x]} | {s for s, _ in in_l[x]}, reverse=True))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x: str, y: str) -> bool:
        for t, m in out_l[x]:
            if t in mapping and (y, mapping[t], m) not in ar:
                return False
        for s, m in in_l[x]:
            if s in mapping and (mapping[s], y, m) not in ar:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in buckets[key_l[x]]:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if search(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    if not search(0):
        return None
    return IsoWitness(dict(mapping), sa, sm)


def graded_iso_check(M: Union[ModelComplex, KnotComplex], K: Union[ModelComplex, KnotComplex]) -> bool:
    """Is M graded-isomorphic to K up to an overall grading shift?

    A model is compared with the Alexander-preserving part of K (the arrows
    it is built from); two knot complexes are compared arrow for arrow.
    """
    return graded_iso_witness(M, K) is not None


def graded_iso_witness(M: Union[ModelComplex, KnotComplex], K: Union[ModelComplex, KnotComplex]) -> Optional[IsoWitness]:
    associated = isinstance(M, ModelComplex) and isinstance(K, KnotComplex)
    return graded_iso(_graded_of(M, False), _graded_of(K, associated))


__all__ = [
    "IsoWitness", "LabelOverflow", "ModelArrow", "ModelComplex", "ModelGenerator", "graded_iso",
    "graded_iso_check", "graded_iso_witness", "make_fused", "make_pole", "make_wire", "reduce_step",
    "reduce_to_base",
]
