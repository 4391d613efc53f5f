import numpy as np
import pytest

import nmglab as g


@pytest.fixture(scope="session")
def order_half():
    return g.FractionalOrder(0.5)


@pytest.fixture(scope="session")
def order_tenth():
    return g.FractionalOrder(0.1)


@pytest.fixture(scope="session")
def two_bump_reports(order_tenth):
    """Two-bump solves at m = 32, 64, 128 (shared by stickiness tests)."""
    datum = g.two_bump_datum(0.5, 0.25)
    return [g.solve(datum, g.GridSpec(m, 4.0), order_tenth) for m in (32, 64, 128)]


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
