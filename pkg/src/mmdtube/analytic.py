"""Closed-form Gaussian-RBF embeddings of one-dimensional Gaussians.

Test oracles: the kernel mean embedding of ``N(mean, variance)`` under a
Gaussian RBF kernel is available in closed form, as is the inner product of
two such embeddings, so Monte-Carlo embeddings and operator pushforwards can
be checked against exact targets.
"""

from __future__ import annotations

import math

import numpy as np

from .kernels import Embedding, KernelSpec, rkhs_inner


def gaussian_embedding_value(mean: float, variance: float, spec: KernelSpec,
                             query) -> float | np.ndarray:
    """Embedding of ``N(mean, variance)`` evaluated at ``query``.

    ``integral k(x, query) dN(mean, variance)(x)`` equals
    ``sigma / sqrt(sigma^2 + variance) * exp(-(query - mean)^2 / (2 (sigma^2 + variance)))``.
    Accepts scalar or array queries; a point mass (variance 0) reduces to a
    plain kernel evaluation.
    """
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    s2 = spec.bandwidth**2 + variance
    q = np.asarray(query, dtype=float)
    out = spec.bandwidth / math.sqrt(s2) * np.exp(-((q - mean) ** 2) / (2.0 * s2))
    return float(out) if out.ndim == 0 else out


def gaussian_embedding_inner(mean_a: float, var_a: float, mean_b: float,
                             var_b: float, spec: KernelSpec) -> float:
    """RKHS inner product of the embeddings of two 1-D Gaussians."""
    if var_a < 0 or var_b < 0:
        raise ValueError("variances must be nonnegative")
    s2 = spec.bandwidth**2 + var_a + var_b
    return spec.bandwidth / math.sqrt(s2) * math.exp(-((mean_a - mean_b) ** 2) / (2.0 * s2))


def gaussian_embedding_norm(mean: float, variance: float, spec: KernelSpec) -> float:
    """RKHS norm of the embedding of ``N(mean, variance)``."""
    return math.sqrt(gaussian_embedding_inner(mean, variance, mean, variance, spec))


def mmd_to_gaussian(e: Embedding, mean: float, variance: float,
                    spec: KernelSpec) -> float:
    """Exact RKHS distance between a weighted embedding and a Gaussian embedding."""
    if e.dim != 1:
        raise ValueError("the Gaussian oracle is one-dimensional")
    self_term = rkhs_inner(e, e, spec)
    gauss_term = gaussian_embedding_inner(mean, variance, mean, variance, spec)
    cross = float(e.weights @ gaussian_embedding_value(mean, variance, spec, e.anchors[:, 0]))
    return math.sqrt(max(0.0, self_term + gauss_term - 2.0 * cross))
