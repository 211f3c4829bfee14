from __future__ import annotations

import random

from hypothesis import strategies as st

from upsilon_cover import complex_core as cc
from upsilon_cover import oneone as oo


def trefoil() -> cc.KnotComplex:
    return cc.make_complex(
        [cc.Generator("x1", 1, 0), cc.Generator("x2", 0, -1), cc.Generator("x3", -1, -2)],
        [cc.Arrow("x2", "x3", 0), cc.Arrow("x2", "x1", 1)],
    )


def random_complex(seed: int, max_generators: int = 8) -> cc.KnotComplex:
    return cc.random_knot_complex(random.Random(seed), max_generators)


seeds = st.integers(min_value=0, max_value=2**31 - 1)
complexes = seeds.map(random_complex)
small_complexes = seeds.map(lambda s: random_complex(s, 5))
staircases = st.integers(min_value=0, max_value=4).map(oo.torus_staircase)
corpus = st.one_of(complexes, staircases)
