import numpy as np
import pytest

from nlwe.ensembles import (
    KET_0,
    KET_1,
    LABELS,
    make_ensemble,
    make_lock_example,
    make_unlock_example,
)


@pytest.fixture
def lock2():
    return make_lock_example(2.0)


@pytest.fixture
def unlock2():
    return make_unlock_example(2.0)


@pytest.fixture
def orthonormal_ensemble():
    """Computational-basis ensemble: every mode discriminates it perfectly."""
    factors = {
        "0": (KET_0, KET_0),
        "1": (KET_0, KET_1),
        "+": (KET_1, KET_0),
        "-": (KET_1, KET_1),
    }
    return make_ensemble({i: 0.25 for i in LABELS}, factors)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
