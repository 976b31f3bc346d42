"""Dependence diagnostics walkthrough.

Covariance exceedance counts N_p(delta) separate the dependence structures
that preserve the phase transition (AR(1), fractional Gaussian noise: counts
bounded in p) from the block construction that breaks it (counts growing
with p).  The greedy packing witnesses the counts, and the concentration
statistic M_p / u_p shows maxima of the benign models pinned near 1.
"""

import numpy as np

from support_recovery import (
    AR1,
    BlockEquicorrelated,
    FGN,
    Gaussian,
    IID,
    gamma_packing,
    stability_ratio,
    udd_count,
)

gauss = Gaussian()
delta = 0.4

print(f"per-row covariance exceedance counts at delta = {delta}")
for p in (100, 400, 1600):
    ar = udd_count(AR1(0.9).covariance(p), delta)
    fg = udd_count(FGN(0.75).covariance(p), delta)
    blk = udd_count(BlockEquicorrelated(0.5).covariance(p), delta)
    print(f"  p={p:5d}: ar1(0.9)={ar:3d}  fgn(0.75)={fg:3d}  block(0.5)={blk:3d}  <- block grows like sqrt(p)")

sigma = AR1(0.5).covariance(10)
pack = gamma_packing(sigma, delta)
print()
print(f"greedy packing of the 10x10 ar1(0.5) covariance at delta={delta}: {pack.tolist()}")
print("  pairwise covariances of the kept coordinates are all <= delta")

print()
print("concentration of maxima, p = 20000, 100 replications: median of M_p / u_p")
rng = np.random.default_rng(123)
for name, model in (("iid", IID(gauss)), ("ar1(0.9)", AR1(0.9)), ("fgn(0.9)", FGN(0.9))):
    s = stability_ratio(model, gauss, 20_000, 20_000, 100, rng)
    print(f"  {name:9s} median={s.median:.3f}  (q25={s.q25:.3f}, q75={s.q75:.3f})")

print()
print("the block model is different: the max over one block is a single normal")
p = 10_000
blocks = BlockEquicorrelated(0.5)
labels_first = np.arange(100)  # first block of size 100
s = stability_ratio(blocks, gauss, p, 100, 100, rng, subset_indices=labels_first)
print(f"  block(0.5) single-block median = {s.median:.3f}  (nowhere near 1)")
