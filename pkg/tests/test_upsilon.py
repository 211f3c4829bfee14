from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upsilon_cover import complex_core as cc
from upsilon_cover import grid as gd
from upsilon_cover import oneone as oo
from upsilon_cover import regions as rg
from upsilon_cover import upsilon as up

from .strategies import complexes, corpus, small_complexes, staircases

F = Fraction
ts = st.integers(min_value=0, max_value=16).map(lambda k: Fraction(k, 8))


def pl(*pts):
    return up.from_samples([(F(t), F(v)) for t, v in pts])


def test_region_examples(tref):
    assert up.upsilon_region(cc.unknot(), rg.halfplane_t(1)) == 0
    assert up.upsilon_region(cc.unknot(), rg.quadrant()) == 0
    assert up.upsilon_region(tref, rg.halfplane_t(1)) == F(1, 2)
    assert up.upsilon_region(tref, rg.halfplane_t(0)) == 0


def test_region_warns_when_not_normalized(tref):
    with pytest.warns(UserWarning):
        up.upsilon_region(tref, rg.quadrant(1, 1))


def test_function_examples(tref):
    assert up.upsilon_function(tref) == pl((0, 0), (1, -1), (2, 0))
    assert up.upsilon_function(cc.unknot()) == up.zero_function()
    assert up.upsilon_function(cc.tensor(tref, tref)) == pl((0, 0), (1, -2), (2, 0))
    assert up.upsilon_function(cc.dual(tref)) == pl((0, 0), (1, 1), (2, 0))
    assert up.upsilon_function(cc.tensor(tref, cc.dual(tref))).is_zero()


def test_tau_examples(tref):
    assert up.tau(tref) == 1
    assert up.tau(cc.unknot()) == 0
    assert up.tau(gd.spinc_slice(gd.build_torus_grid(7), 1)) == 2


def test_oracle_examples(tref):
    assert up.upsilon_oracle(tref, rg.halfplane_t(1)) == F(1, 2)
    assert up.upsilon_oracle(cc.unknot(), rg.halfplane_t(F(1, 3))) == 0
    assert up.upsilon_oracle(oo.twist_complex(2), rg.halfplane_t(1)) == 0


def test_piecewise_linear_basics():
    f = pl((0, 0), (1, -1), (2, 0))
    assert f(F(1, 2)) == F(-1, 2)
    assert f.slopes() == [-1, 1]
    assert (f + (-f)).is_zero()
    assert f.scale(3) == pl((0, 0), (1, -3), (2, 0))
    assert up.PiecewiseLinear.from_csv(f.to_csv()) == f
    assert f.to_csv().splitlines() == ["t,value", "0/1,0/1", "1/1,-1/1", "2/1,0/1"]
    assert pl((0, 0), (1, 1), (2, 2)).breakpoints == ((0, 0), (2, 2))
    with pytest.raises(ValueError):
        up.PiecewiseLinear(((F(0), F(0)), (F(1), F(0))))


def test_staircase_values():
    for n in range(1, 6):
        f = up.upsilon_function(oo.torus_staircase(n))
        assert f == pl((0, 0), (1, -n), (2, 0))
        assert up.tau(oo.torus_staircase(n)) == n


# --- properties --------------------------------------------------------------


@given(corpus, corpus)
@settings(max_examples=25)
def test_additivity(K1, K2):
    assert up.upsilon_function(cc.tensor(K1, K2)) == up.upsilon_function(K1) + up.upsilon_function(K2)


@given(corpus)
def test_dual_negates(K):
    assert up.upsilon_function(cc.dual(K)) == -up.upsilon_function(K)


@given(complexes, st.integers(-2, 2), st.integers(-3, 3), st.integers(0, 1), ts)
def test_acyclic_summand_invariance(K, a, m, u, t):
    box = cc.acyclic_box("q", a, F(m), u)
    K2 = cc.direct_sum(K, box)
    C = rg.halfplane_t(t)
    assert up.upsilon_region(K2, C) == up.upsilon_region(K, C)
    assert up.upsilon_function(K2) == up.upsilon_function(K)


@given(small_complexes, ts)
def test_region_matches_oracle(K, t):
    C = rg.halfplane_t(t)
    assert up.upsilon_region(K, C) == up.upsilon_oracle(K, C)


@given(small_complexes, st.integers(-1, 1), st.integers(-1, 1))
def test_union_region_matches_oracle(K, x, y):
    C = rg.union(rg.quadrant(), rg.quadrant(x, -x), rg.halfplane_t(F(1, 2)).translate(y, y))
    if not rg.is_normalized(C):
        return
    assert up.upsilon_region(K, C) == up.upsilon_oracle(K, C)


@given(corpus, ts)
def test_function_matches_pointwise(K, t):
    assert up.upsilon_function(K)(t) == up.upsilon_t(K, t)


@given(staircases)
def test_upsilon_zero_at_ends(K):
    f = up.upsilon_function(K)
    assert f(0) == 0 and f(2) == 0
