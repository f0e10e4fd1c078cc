"""Learning the embedded transfer operator and pushing embeddings forward.

Fits the regularized operator on OU pairs, checks the pushforward of a fresh
initial embedding against the exactly known evolved Gaussian, and shows the
operator norm and its ridge dependence.
"""

import math

import numpy as np

from mmdtube import (
    GaussianInitial,
    KernelSpec,
    embed_sample,
    fit,
    median_bandwidth,
    mmd_to_gaussian,
    operator_norm,
    ou_model,
    pushforward,
    simulate_pairs,
)

lag = 0.5
model = ou_model(1.0, 1.0)
# exact image of N(0.5, 2) after one lag
mean_img = 0.5 * math.exp(-lag)
var_img = 2.0 * math.exp(-2.0 * lag) + 1.0 - math.exp(-2.0 * lag)

rng = np.random.default_rng(123)
fresh = 0.5 + math.sqrt(2.0) * rng.standard_normal(2000)
initial = embed_sample(fresh[:, None])

print("== pushforward accuracy vs training size ==")
print(f"{'m':>6}  {'mmd(pushforward, exact image)':>30}")
for m in (50, 200, 1000, 4000):
    data = simulate_pairs(model, GaussianInitial(0.5, 2.0), lag, m, seed=42)
    spec = KernelSpec(median_bandwidth(data.x))
    op = fit(data, 0.01, spec)
    err = mmd_to_gaussian(pushforward(op, initial), mean_img, var_img, spec)
    print(f"{m:>6}  {err:>30.5f}")

print("\n== operator norm vs regularization ==")
data = simulate_pairs(model, GaussianInitial(0.5, 2.0), lag, 400, seed=7)
spec = KernelSpec(median_bandwidth(data.x))
print(f"{'lambda':>8}  {'operator norm':>13}")
for lam in (1e-4, 1e-2, 1e-1, 1.0, 10.0):
    print(f"{lam:>8}  {operator_norm(fit(data, lam, spec)):>13.5f}")
