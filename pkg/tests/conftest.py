import numpy as np
import pytest

import ilcsolve as il
from helpers import EXAMPLE_G, EXAMPLE_SHIFT


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def example_g():
    return EXAMPLE_G.copy()


@pytest.fixture
def example_dec(example_g):
    return il.build_decomposition(example_g)


@pytest.fixture
def deadbeat_spec(example_dec, example_g):
    return il.design_deadbeat(example_dec, example_g, EXAMPLE_SHIFT)
