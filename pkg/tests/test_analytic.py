import math

import numpy as np
import pytest

from mmdtube import (
    Embedding,
    embed_sample,
    eval_kernel,
    gaussian_embedding_inner,
    gaussian_embedding_norm,
    gaussian_embedding_value,
    mmd,
    mmd_to_gaussian,
)


class TestGaussianEmbeddingValue:
    def test_point_mass_reduces_to_kernel(self, spec):
        for q in (-1.0, 0.0, 2.5):
            assert gaussian_embedding_value(0.3, 0.0, spec, q) == pytest.approx(
                eval_kernel([0.3], [q], spec), abs=1e-15)

    def test_center_value(self, spec):
        # query = mean, sigma = s = 1: sigma / sqrt(sigma^2 + s^2) = 1/sqrt(2)
        assert gaussian_embedding_value(0.7, 1.0, spec, 0.7) == pytest.approx(
            1.0 / math.sqrt(2.0), abs=1e-15)

    def test_vectorized_queries(self, spec):
        qs = np.array([-1.0, 0.0, 1.0])
        vals = gaussian_embedding_value(0.0, 2.0, spec, qs)
        assert vals.shape == (3,)
        assert vals[0] == vals[2] < vals[1]

    def test_negative_variance_rejected(self, spec):
        with pytest.raises(ValueError):
            gaussian_embedding_value(0.0, -1.0, spec, 0.0)

    def test_monte_carlo_agreement(self, spec):
        rng = np.random.default_rng(0)
        xs = 0.4 + math.sqrt(1.5) * rng.standard_normal(200_000)
        mc = np.exp(-0.5 * (xs - 1.1) ** 2).mean()
        assert gaussian_embedding_value(0.4, 1.5, spec, 1.1) == pytest.approx(mc, abs=2e-3)


class TestGaussianEmbeddingInner:
    def test_symmetry(self, spec):
        a = gaussian_embedding_inner(0.1, 0.5, -0.7, 2.0, spec)
        b = gaussian_embedding_inner(-0.7, 2.0, 0.1, 0.5, spec)
        assert a == b

    def test_point_masses_reduce_to_kernel(self, spec):
        assert gaussian_embedding_inner(0.0, 0.0, 1.0, 0.0, spec) == pytest.approx(
            math.exp(-0.5), abs=1e-15)

    def test_norm_consistent_with_inner(self, spec):
        n = gaussian_embedding_norm(0.5, 2.0, spec)
        assert n**2 == pytest.approx(gaussian_embedding_inner(0.5, 2.0, 0.5, 2.0, spec))

    def test_monte_carlo_agreement(self, spec):
        rng = np.random.default_rng(1)
        xs = rng.standard_normal(100_000)  # N(0, 1)
        ys = 0.5 + math.sqrt(0.5) * rng.standard_normal(100_000)
        mc = np.exp(-0.5 * (xs - ys) ** 2).mean()
        assert gaussian_embedding_inner(0.0, 1.0, 0.5, 0.5, spec) == pytest.approx(
            mc, abs=2e-3)


class TestMmdToGaussian:
    def test_delta_vs_point_mass_matches_embedding_mmd(self, spec):
        d = Embedding([[0.4]], [1.0])
        target = Embedding([[1.2]], [1.0])
        assert mmd_to_gaussian(d, 1.2, 0.0, spec) == pytest.approx(
            mmd(d, target, spec), abs=1e-12)

    def test_empirical_embedding_converges(self, spec):
        rng = np.random.default_rng(2)
        xs = 0.5 + math.sqrt(2.0) * rng.standard_normal(4000)
        e = embed_sample(xs[:, None])
        assert mmd_to_gaussian(e, 0.5, 2.0, spec) < 0.03

    def test_rejects_multidimensional_embeddings(self, spec):
        e = Embedding(np.zeros((2, 2)), np.ones(2))
        with pytest.raises(ValueError):
            mmd_to_gaussian(e, 0.0, 1.0, spec)
