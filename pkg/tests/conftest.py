import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

TOY_DIR = Path(__file__).parent.parent / "data" / "toy"


@pytest.fixture
def rng():
    return np.random.default_rng(20160613)


@pytest.fixture(scope="session")
def toy_dir():
    if not TOY_DIR.is_dir():
        pytest.skip("bundled toy data not present")
    return TOY_DIR
