from pathlib import Path

import numpy as np
import pytest

from fpbound import IndexSet, PValueVector

REPO = Path(__file__).resolve().parents[1]
DATA = REPO / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_instance(rng, m_max=64):
    """A random (p, S, alpha) triple mixing smooth and clumped p-values."""
    m = int(rng.integers(1, m_max + 1))
    style = rng.integers(3)
    if style == 0:
        values = rng.uniform(size=m)
    elif style == 1:
        values = np.minimum(1.0, rng.beta(0.5, 3.0, size=m))
    else:  # heavy ties
        values = rng.choice([0.0, 0.01, 0.05, 0.2, 0.5, 1.0], size=m)
    p = PValueVector(values)
    mask = rng.uniform(size=m) < rng.uniform(0.2, 1.0)
    S = IndexSet.of(mask)
    alpha = float(rng.uniform(0.01, 0.9))
    return p, S, alpha
