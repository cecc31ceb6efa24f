import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from strassmann.skolem import QUINTIC_INSTANCE, ThueInstance, solve_thue  # noqa: E402

PINNED_V = ((-4, -5, 5, -5, 5), (-17135289, 5549965, 18075, 27069090, -17490060))
PINNED_U = {(0, 4): (-17490060, -17135289, -11940095, 17508135, 9579030)}
FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def quintic():
    return ThueInstance(**QUINTIC_INSTANCE, pinned_v=PINNED_V, pinned_u=dict(PINNED_U))


@pytest.fixture(scope="session")
def quintic_report(quintic):
    return solve_thue(quintic, N=3, max_level=2)
