"""Desk-scale phase diagram.

Runs a coarse (beta, r) grid at p = 2000 with the sparsity-agnostic Gaussian
threshold sqrt(2 log p), prints the exact-recovery probabilities as a text
heatmap, and writes the grid to phase_small.csv (the same CSV the plotting
package consumes).
"""

import numpy as np

from support_recovery import Gaussian, GridSpec, run_grid, strong_boundary

betas = tuple(np.round(np.linspace(0.2, 0.9, 8), 3))
rs = tuple(np.round(np.linspace(0.5, 6.0, 12), 3))

spec = GridSpec(
    p=2000,
    beta_grid=betas,
    r_grid=rs,
    reps=100,
    family=Gaussian(),
    noise={"kind": "iid"},
    procedure={"kind": "agnostic"},
    seed=7,
)
result = run_grid(spec, parallelism=1)
result.write_csv("phase_small.csv")

print("empirical P[exact recovery], p=2000, 100 reps per cell")
print("(* marks the cell just above the boundary g(beta))")
header = "beta\\r " + " ".join(f"{r:5.2f}" for r in rs)
print(header)
for beta in betas:
    row = []
    g = strong_boundary(beta, 2.0)
    for r in rs:
        cell = result.cell(beta, r)
        mark = "*" if 0 <= r - g < (rs[1] - rs[0]) else " "
        row.append(f"{cell.prob_exact:4.2f}{mark}")
    print(f"{beta:5.2f}  " + " ".join(row))

print()
print("wrote phase_small.csv; render it with the viz package:")
print("  render --grid phase_small.csv --boundary boundary.csv --out phase_small.png")
