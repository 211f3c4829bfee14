from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from upsilon_cover import complex_core as cc
from upsilon_cover import concordance as co
from upsilon_cover import models as md
from upsilon_cover import oneone as oo
from upsilon_cover import upsilon as up
from upsilon_cover.grid import symmetric_residue

from .strategies import trefoil


def test_staircase_examples():
    T1 = oo.torus_staircase(1)
    assert T1 == trefoil()
    assert up.upsilon_function(oo.torus_staircase(2))(1) == -2
    assert md.graded_iso_check(oo.torus_staircase(0), cc.unknot())
    with pytest.raises(ValueError):
        oo.torus_staircase(-1)


@pytest.mark.parametrize("n", range(1, 7))
def test_staircase_shape(n):
    K = oo.torus_staircase(n)
    assert cc.validate(K) == [] and cc.correction_term(K) == 0
    assert [K.by_name[f"x{i}"].alexander for i in range(1, 2 * n + 2)] == list(range(n, -n - 1, -1))


def test_twist_examples():
    assert md.graded_iso_check(oo.twist_complex(1), oo.torus_staircase(1))
    K = oo.twist_complex(2)
    assert len(K) == 5
    assert Counter(g.alexander for g in K.generators) == {-1: 1, 0: 3, 1: 1}
    assert up.upsilon_function(K).is_zero()
    with pytest.raises(ValueError):
        oo.twist_complex(0)


@pytest.mark.parametrize("n", range(1, 11))
def test_twist_complex_properties(n):
    K = oo.twist_complex(n)
    assert cc.validate(K) == [] and cc.correction_term(K) == 0
    for i in range(1, 2 * n + 2):
        expected = 0 if (i - n - 1) % 2 == 0 else (1 if i > n + 1 else -1)
        assert K.by_name[f"x{i}"].alexander == expected
    delta = co.knot_polynomial(oo.twist_alexander_polynomial(n))
    assert co.det_m(delta, 2) == 2 * n + 1
    # odd twist knots behave like the trefoil, even ones like the figure eight
    assert up.tau(K) == (1 if n % 2 else 0)


@pytest.mark.parametrize("n", range(1, 6))
def test_torus_oneone_matches_staircase(n):
    K = oo.torus_oneone(n)
    assert cc.validate(K.complex) == []
    assert up.upsilon_function(K.complex) == up.upsilon_function(oo.torus_staircase(n))
    assert isinstance(cc.local_equiv_search(K.complex, oo.torus_staircase(n), None), cc.Equivalent)
    assert co.det_m(co.knot_polynomial(oo.torus_alexander_polynomial(n)), 2) == 2 * n + 1


def test_lift_table_examples():
    T = oo.lift_table(oo.torus_oneone(2))
    assert len(T.rows) == 13
    top = max(T.rows, key=lambda r: r.alexander)
    assert (top.i, top.j, top.alexander) == (2, 2, 2)
    T = oo.lift_table(oo.twist_oneone(2))
    for cls in (4, -4):
        rows = T.by_class()[symmetric_residue(cls, 5)]
        assert rows and all(r.alexander == 0 for r in rows)


@pytest.mark.parametrize("n", range(1, 6))
def test_lift_row_counts(n):
    assert len(oo.lift_table(oo.torus_oneone(n)).rows) == (n + 1) ** 2 + n ** 2
    assert len(oo.lift_table(oo.twist_oneone(n)).rows) == (n + 1) ** 2 + n ** 2


def test_zero_classes_frozen():
    # computed by exhausting the lift tables
    z = lambda fam, n: oo.zero_alexander_classes(oo.lift_table(oo.oneone(fam, n)))  # noqa: E731
    assert z("torus", 1) == [-1, 1]
    assert z("torus", 3) == [-3, 3]
    assert z("twist", 1) == [-1, 1]
    assert z("twist", 2) == [-2, -1, 1, 2]
    assert z("twist", 4) == [-4, -3, -1, 1, 3, 4]


@given(st.sampled_from(["torus", "twist"]), st.integers(1, 6))
def test_lift_classes_are_symmetric(fam, n):
    T = oo.lift_table(oo.oneone(fam, n))
    K = oo.oneone(fam, n)
    for r in T.rows:
        assert r.spinc_class == symmetric_residue(r.i - r.j, T.p)
        assert r.alexander == Fraction(K.alexander(r.i) + K.alexander(r.j), 2)
    zs = oo.zero_alexander_classes(T)
    assert zs == sorted(-c for c in zs)
    assert 0 not in zs


@pytest.mark.parametrize("fam,n", [("torus", 1), ("torus", 3), ("twist", 2), ("twist", 5)])
def test_lift_s0_copies_input(fam, n):
    K = oo.oneone(fam, n)
    L = oo.lift_s0_complex(K)
    assert all(g.spinc == 0 for g in L.generators)
    assert md.graded_iso_check(K.complex, L)
    assert up.upsilon_function(L) == up.upsilon_function(K.complex)


def test_lift_s0_examples():
    assert md.graded_iso_check(oo.lift_s0_complex(oo.torus_oneone(1)), oo.torus_staircase(1))
    assert md.graded_iso_check(oo.lift_s0_complex(oo.twist_oneone(2)), oo.twist_complex(2))
