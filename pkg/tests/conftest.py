import numpy as np
import pytest

from fredholm_pairs.hilbert import Operator


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def nilpotent():
    return Operator([[0, 1], [0, 0]])
