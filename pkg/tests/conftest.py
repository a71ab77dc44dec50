import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def k2():
    from hypsys.numfield import make_field

    return make_field([1, 0, -2])


@pytest.fixture(scope="session")
def sqrt2(k2):
    return k2.gen


F = Fraction
