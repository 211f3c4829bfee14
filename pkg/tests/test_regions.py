from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from upsilon_cover import regions as rg

small = st.integers(min_value=-6, max_value=6)
ts = st.integers(min_value=0, max_value=8).map(lambda k: Fraction(k, 4))
coeff = st.integers(min_value=0, max_value=4)


@st.composite
def halfplanes(draw):
    a, b = draw(coeff), draw(coeff)
    if a + b == 0:
        a = 1
    return rg.HalfPlane(a, b, draw(small))


@st.composite
def sw_regions(draw):
    pieces = draw(st.lists(st.lists(halfplanes(), min_size=1, max_size=3), min_size=1, max_size=3))
    return rg.region(*pieces)


def test_halfplane_validation():
    with pytest.raises(ValueError):
        rg.HalfPlane(-1, 1)
    with pytest.raises(ValueError):
        rg.HalfPlane(0, 0)


def test_halfplane_t_entry_times():
    H1 = rg.halfplane_t(1)
    assert rg.entry_time(H1, (1, 0)) == Fraction(1, 2)
    assert rg.entry_time(H1, (0, 1)) == Fraction(1, 2)
    assert rg.entry_time(rg.halfplane_t(0), (5, 0)) == 0
    assert rg.entry_time(rg.halfplane_t(2), (0, 5)) == 0
    with pytest.raises(ValueError):
        rg.halfplane_t(3)


def test_quadrant_and_union():
    Q = rg.quadrant()
    assert rg.entry_time(Q, (2, -1)) == 2
    U = rg.union(rg.quadrant(0, 0), rg.quadrant(-1, 1))
    assert rg.entry_time(U, (-1, 1)) == 0
    assert rg.is_normalized(Q) and rg.is_normalized(U)
    assert not rg.is_normalized(rg.quadrant(1, 1))


def test_parse_and_json():
    assert rg.parse_region("ht:1/2") == rg.halfplane_t(Fraction(1, 2))
    with pytest.raises(ValueError):
        rg.parse_region("box")
    C = rg.union(rg.quadrant(), rg.halfplane_t(Fraction(3, 2)))
    assert rg.from_dict(rg.to_dict(C)) == C


@given(sw_regions(), small, small, small)
def test_translation_equivariance(C, x, y, s):
    assert rg.entry_time(C.translate(s, s), (x, y)) == rg.entry_time(C, (x, y)) - s


@given(sw_regions(), small, small)
def test_membership_duality(C, x, y):
    s = rg.entry_time(C, (x, y))
    assert C.contains((x - s, y - s))
    assert not C.contains((x - s + Fraction(1, 1000), y - s + Fraction(1, 1000)))


@given(sw_regions(), small, small, st.integers(0, 3), st.integers(0, 3))
def test_south_west_monotone(C, x, y, dx, dy):
    assert rg.entry_time(C, (x - dx, y - dy)) <= rg.entry_time(C, (x, y))


@given(ts, small, small)
def test_halfplane_t_formula(t, a, j):
    assert rg.entry_time(rg.halfplane_t(t), (a, j)) == t / 2 * a + (1 - t / 2) * j
