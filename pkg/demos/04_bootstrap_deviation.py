"""Bootstrap quantiles of the operator estimation error.

Resamples the training pairs, refits, and records exact operator deviation
norms; their upper quantile calibrates how far the fitted operator may sit
from the truth.  A size sweep recovers the empirical convergence rate, and a
fresh-sample oracle shows what the bootstrap is tracking.
"""

import numpy as np

from mmdtube import (
    GaussianInitial,
    KernelSpec,
    bootstrap_deviation_quantile,
    embed_sample,
    fit,
    median_bandwidth,
    mmd,
    ou_model,
    pushforward,
    simulate_pairs,
)
from mmdtube.experiments import fit_loglog_slope

model = ou_model(1.0, 1.0)
initial = GaussianInitial(0.5, 2.0)
lag, lam = 0.5, 0.05

print("== deviation histogram at m = 200 ==")
data = simulate_pairs(model, initial, lag, 200, seed=5)
spec = KernelSpec(median_bandwidth(data.x))
summary = bootstrap_deviation_quantile(data, lam, spec, m_b=200, alpha=0.05, seed=6)
hist, edges = np.histogram(summary.deviations, bins=12)
for count, lo, hi in zip(hist, edges[:-1], edges[1:]):
    print(f"[{lo:.3f}, {hi:.3f})  {'#' * count}")
print(f"95% quantile delta = {summary.quantile_delta:.4f}")

print("\n== delta vs training size, with the fresh-sample oracle ==")
print(f"{'m':>6}  {'delta':>8}  {'oracle mmd':>10}")
ms, deltas = [], []
for i, m in enumerate((50, 100, 200, 400, 800)):
    data = simulate_pairs(model, initial, lag, m, seed=10 + i)
    spec = KernelSpec(median_bandwidth(data.x))
    s = bootstrap_deviation_quantile(data, lam, spec, m_b=100, alpha=0.05, seed=20 + i)
    op = fit(data, lam, spec)
    fresh = simulate_pairs(model, initial, lag, 5000, seed=30 + i)
    oracle = mmd(embed_sample(fresh.y), pushforward(op, embed_sample(fresh.x)), spec)
    print(f"{m:>6}  {s.quantile_delta:>8.4f}  {oracle:>10.4f}")
    ms.append(m)
    deltas.append(s.quantile_delta)

slope, _, _ = fit_loglog_slope(ms, deltas)
print(f"\nlog-log slope of delta vs m: {slope:.3f}")
