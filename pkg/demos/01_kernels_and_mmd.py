"""Kernels, embeddings, and MMD: the geometric primitives.

Walks through kernel evaluation, Gram matrices, weighted embeddings, and the
MMD between empirical and exact Gaussian embeddings, then shows the
Monte-Carlo error shrinking like 1/sqrt(m).
"""

import numpy as np

from mmdtube import (
    Embedding,
    KernelSpec,
    embed_sample,
    eval_kernel,
    gaussian_embedding_norm,
    gram,
    median_bandwidth,
    mmd,
    mmd_to_gaussian,
    rkhs_norm,
)

spec = KernelSpec(bandwidth=1.0)

print("== kernel evaluations ==")
print(f"k(0, 0)          = {eval_kernel([0.0], [0.0], spec):.6f}")
print(f"k(0, 1)          = {eval_kernel([0.0], [1.0], spec):.6f}")
print(f"k(0, 2), sigma=2 = {eval_kernel([0.0], [2.0], KernelSpec(2.0)):.6f}")

print("\n== a small Gram matrix ==")
points = np.array([[-1.0], [0.0], [1.5]])
print(gram(points, points, spec).round(4))

print("\n== embeddings and distances ==")
delta0 = Embedding([[0.0]], [1.0])
delta1 = Embedding([[1.0]], [1.0])
print(f"||delta_0||            = {rkhs_norm(delta0, spec):.6f}")
print(f"mmd(delta_0, delta_1)  = {mmd(delta0, delta1, spec):.6f}")

rng = np.random.default_rng(0)
print("\n== Monte-Carlo embedding of N(0.5, 2) vs the closed form ==")
print(f"{'m':>7}  {'mmd to exact':>12}")
for m in (100, 1_000, 10_000):
    samples = 0.5 + np.sqrt(2.0) * rng.standard_normal(m)
    err = mmd_to_gaussian(embed_sample(samples[:, None]), 0.5, 2.0, spec)
    print(f"{m:>7}  {err:>12.5f}")
print(f"exact embedding norm: {gaussian_embedding_norm(0.5, 2.0, spec):.5f}")

print("\n== median-heuristic bandwidth of a sample ==")
sample = rng.standard_normal((500, 1))
print(f"median pairwise distance: {median_bandwidth(sample):.4f}")
