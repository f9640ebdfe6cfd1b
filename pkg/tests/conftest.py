import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pqdtw.cli import warm_kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_numba():
    # compile the jit kernels once so individual tests don't pay for it
    warm_kernels()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
