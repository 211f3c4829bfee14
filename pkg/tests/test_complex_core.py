from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upsilon_cover import complex_core as cc
from upsilon_cover import oneone as oo

from .strategies import complexes, corpus, random_complex, seeds, small_complexes, trefoil


# --- validate -------------------------------------------------------------


def test_validate_examples(tref):
    assert cc.validate(cc.unknot()) == []
    assert cc.validate(tref) == []
    bad = cc.make_complex(tref.generators, [cc.Arrow("x2", "x3", 0), cc.Arrow("x2", "x1", 0)])
    kinds = [(v.kind, "x2" in v.message and "x1" in v.message) for v in cc.validate(bad)]
    assert ("maslov", True) in kinds


def test_validate_filtration_and_d_squared():
    gens = [cc.Generator("a", 0, 0), cc.Generator("b", 1, -1)]
    assert {v.kind for v in cc.validate(cc.make_complex(gens, [cc.Arrow("a", "b", 0)]))} == {"filtration"}
    gens = [cc.Generator("a", 0, 0), cc.Generator("b", 0, -1), cc.Generator("c", 0, -2)]
    K = cc.make_complex(gens, [cc.Arrow("a", "b", 0), cc.Arrow("b", "c", 0)])
    assert [v.kind for v in cc.validate(K)] == ["d-squared"]


def test_make_complex_cancels_parallel_arrows():
    gens = [cc.Generator("a", 0, 0), cc.Generator("b", 0, -1)]
    K = cc.make_complex(gens, [cc.Arrow("a", "b", 0), cc.Arrow("a", "b", 0)])
    assert K.arrows == ()


# --- correction term, cosets, V --------------------------------------------


def test_correction_term_examples(tref):
    assert cc.correction_term(cc.unknot()) == 0
    assert cc.correction_term(tref) == 0
    with pytest.raises(cc.NotKnotType):
        cc.correction_term(cc.acyclic_box())


def test_generator_coset_examples(tref):
    co = cc.generator_coset(cc.unknot())
    assert co.base.terms == frozenset({("z", 0)}) and list(co.boundary_basis) == []
    co = cc.generator_coset(tref)
    assert co.base.terms == frozenset({("x1", 0)})
    assert [b.terms for b in co.boundary_basis] == [frozenset({("x1", 0), ("x3", -1)})]


def test_generator_coset_figure_eight():
    K = oo.twist_complex(2)
    co = cc.generator_coset(K)
    assert co.base.gradings(K) == {0}
    cycles = list(cc.enumerate_coset(K))
    assert len(cycles) == 2 ** len(co.boundary_basis)
    assert all(z.is_homogeneous(K) for z in cycles)


def test_v_invariant_examples(tref):
    assert all(cc.v_invariant(cc.unknot(), m) == 0 for m in range(6))
    assert cc.v_invariant(tref, 0) == -2
    assert cc.v_invariant(tref, 1) == 0


def test_surgery_d_examples():
    assert cc.surgery_d(1, 0, 0) == 0
    assert cc.surgery_d(1, 0, -2) == -2
    assert cc.surgery_d(4, 2, 0) == Fraction(-1, 4)


# --- algebra -----------------------------------------------------------------


def test_tensor_examples(tref):
    T = cc.tensor(tref, tref)
    assert len(T) == 9 and cc.correction_term(T) == 0
    assert cc.validate(T) == []
    U = cc.tensor(tref, cc.unknot())
    assert sorted((g.alexander, g.maslov) for g in U.generators) == sorted(
        (g.alexander, g.maslov) for g in tref.generators
    )


def test_dual_examples(tref):
    assert cc.correction_term(cc.dual(tref)) == 0
    assert cc.dual(cc.dual(tref)) == tref
    u = cc.dual(cc.unknot())
    assert [(g.alexander, g.maslov) for g in u.generators] == [(0, 0)]


def test_direct_sum_and_acyclic(tref):
    assert cc.correction_term(cc.direct_sum(tref, cc.acyclic_box())) == 0
    assert cc.is_acyclic(cc.acyclic_box())
    assert not cc.is_acyclic(cc.unknot())


def test_local_equiv_examples(tref):
    assert isinstance(cc.local_equiv_search(tref, cc.direct_sum(tref, cc.acyclic_box())), cc.Equivalent)
    assert isinstance(cc.local_equiv_search(cc.unknot(), tref), cc.NoneFound)
    big1 = cc.tensor(oo.torus_staircase(2), oo.torus_staircase(1))
    big2 = cc.tensor(oo.torus_staircase(1), oo.torus_staircase(2))
    assert len(big1) >= 15
    with pytest.raises(cc.CapExceeded):
        cc.local_equiv_search(big1, big2, 10**6)


def test_change_basis_rejects_unfiltered(tref):
    # U x1 sits above x3 in Alexander grading, and U^-1 x3 is not a polynomial multiple
    for x, y in (("x3", "x1"), ("x1", "x3"), ("x1", "x1")):
        with pytest.raises(ValueError):
            cc.change_basis(tref, x, y)


@given(complexes, st.data())
@settings(max_examples=25)
def test_change_basis_is_local_equivalence(K, data):
    x = data.draw(st.sampled_from(K.names))
    y = data.draw(st.sampled_from(K.names))
    try:
        K2 = cc.change_basis(K, x, y)
    except ValueError:
        return
    assert cc.validate(K2) == []
    assert isinstance(cc.local_equiv_search(K, K2, None), cc.Equivalent)


def test_json_round_trip(tref):
    for K in (tref, cc.unknot(), oo.twist_complex(3), random_complex(7)):
        assert cc.loads(cc.dumps(K)) == K


# --- properties --------------------------------------------------------------


@given(corpus)
def test_random_complexes_are_knot_type(K):
    assert cc.validate(K) == []
    assert cc.homology_rank(K) == 1
    assert len(cc.eliminate(K)) == 1


@given(corpus, corpus)
@settings(max_examples=25)
def test_tensor_adds_d(K1, K2):
    T = cc.tensor(K1, K2)
    assert cc.validate(T) == []
    assert cc.correction_term(T) == cc.correction_term(K1) + cc.correction_term(K2)


@given(corpus)
def test_dual_negates_d(K):
    D = cc.dual(K)
    assert cc.validate(D) == []
    assert cc.correction_term(D) == -cc.correction_term(K)
    assert cc.dual(D) == K


@given(complexes, seeds)
@settings(max_examples=10)
def test_elimination_order_independent(K, seed):
    rng = random.Random(seed)
    counts = {len(cc.eliminate(K, rng)) for _ in range(100)}
    assert counts == {len(cc.eliminate(K))}


@given(corpus)
def test_rank_matches_collapse(K):
    survivors = len(cc.eliminate(K))
    assert 2 * cc.differential_rank(K) == len(K) - survivors


@given(small_complexes, st.integers(0, 3))
def test_v_invariant_matches_oracle(K, m):
    assert cc.v_invariant(K, m) == cc.v_invariant_oracle(K, m)


@given(complexes, st.integers(-2, 2), st.integers(0, 1))
def test_acyclic_summand_keeps_d(K, a, u):
    d = cc.correction_term(K)
    box = cc.acyclic_box("q", a, Fraction(d) + 3, u)
    assert cc.correction_term(cc.direct_sum(K, box)) == d


@given(complexes)
def test_shift_moves_d(K):
    assert cc.correction_term(cc.shift(K, 0, 2)) == cc.correction_term(K) + 2
