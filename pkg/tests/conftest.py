from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from upsilon_cover import complex_core as cc

from .strategies import trefoil

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def tref() -> cc.KnotComplex:
    return trefoil()
