import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _numpy_errstate():
    with np.errstate(all="raise", under="ignore"):
        yield
