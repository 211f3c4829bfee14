from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from upsilon_cover import _gf2_py, gf2

try:
    from upsilon_cover import _gf2_ext
except ImportError:  # pragma: no cover - depends on the build
    _gf2_ext = None

needs_ext = pytest.mark.skipif(_gf2_ext is None, reason="compiled kernel not built")

vectors = st.lists(st.integers(min_value=0, max_value=(1 << 130) - 1), max_size=12)


def test_backend_is_reported():
    assert gf2.BACKEND in ("cython", "python")


def test_small_cases():
    assert gf2.rank([]) == 0
    assert gf2.rank([0, 0]) == 0
    assert gf2.rank([0b11, 0b01, 0b10]) == 2
    assert gf2.solve([0b01, 0b10], 0b11) == 0b11
    assert gf2.solve([0b01], 0b10) is None
    assert gf2.in_span(0b110, [0b010, 0b100])
    assert not gf2.in_span(0b001, [0b010, 0b100])


def _apply(columns: list[int], x: int) -> int:
    out = 0
    for i, c in enumerate(columns):
        if x >> i & 1:
            out ^= c
    return out


@given(vectors)
def test_rank_nullity(cols):
    kernel = gf2.nullspace(cols)
    assert gf2.rank(cols) + len(kernel) == len(cols)
    assert gf2.rank(kernel) == len(kernel)
    for k in kernel:
        assert _apply(cols, k) == 0


@given(vectors, st.integers(min_value=0, max_value=(1 << 12) - 1))
def test_solve_finds_preimage(cols, x):
    x &= (1 << len(cols)) - 1
    rhs = _apply(cols, x)
    sol = gf2.solve(cols, rhs)
    assert sol is not None and _apply(cols, sol) == rhs


@needs_ext
@given(vectors, st.integers(min_value=0, max_value=(1 << 130) - 1))
def test_backends_agree(cols, rhs):
    assert _gf2_ext.rank(cols) == _gf2_py.rank(cols)
    assert _gf2_ext.rank(_gf2_ext.nullspace(cols)) == _gf2_py.rank(_gf2_py.nullspace(cols))
    a, b = _gf2_ext.solve(cols, rhs), _gf2_py.solve(cols, rhs)
    assert (a is None) == (b is None)
    if a is not None:
        assert _apply(cols, a) == _apply(cols, b) == rhs
