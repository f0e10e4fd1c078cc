import math

import numpy as np
import pytest

from mmdtube import Embedding, GaussianInitial, KernelSpec, ou_model, simulate_pairs


@pytest.fixture
def spec():
    return KernelSpec(bandwidth=1.0)


def rbf(x, y, bandwidth=1.0):
    """Scalar reference kernel, independent of the library's vectorized path."""
    diff = np.atleast_1d(np.asarray(x, dtype=float)) - np.atleast_1d(np.asarray(y, dtype=float))
    return math.exp(-float(diff @ diff) / (2.0 * bandwidth**2))


def random_embedding(rng, dim, max_anchors=50):
    n = int(rng.integers(1, max_anchors + 1))
    anchors = rng.standard_normal((n, dim))
    weights = rng.standard_normal(n)
    return Embedding(anchors, weights)


def ou_dataset(m, lag=0.5, seed=0, mean=0.5, variance=2.0):
    return simulate_pairs(ou_model(1.0, 1.0), GaussianInitial(mean, variance),
                          lag=lag, m=m, seed=seed)
