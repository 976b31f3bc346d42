"""Tour of the phase-transition boundaries.

Prints the three boundary curves (detection, approximate recovery, exact
recovery) for Gaussian and Laplace tails, the power-analysis consequence of
their 1 : 3 : 9 ratios at beta = 3/4, and the linear reparametrization of
the Gaussian exact-recovery curve.
"""

import numpy as np

from support_recovery import (
    detection_boundary,
    non_udd_boundary,
    reparam,
    reparametrized_boundary,
    strong_boundary,
    weak_boundary,
)

print("boundaries at a few sparsity levels (nu = 2, Gaussian)")
print(f"{'beta':>6} {'detect f':>9} {'weak h':>7} {'strong g':>9} {'block 4(1-b)':>13}")
for beta in (0.55, 0.65, 0.75, 0.85, 0.95):
    f = detection_boundary(beta)
    print(f"{beta:6.2f} {f:9.4f} {weak_boundary(beta):7.4f} "
          f"{strong_boundary(beta, 2.0):9.4f} {non_udd_boundary(beta):13.4f}")

print()
print("power analysis at beta = 3/4:")
f, h, g = detection_boundary(0.75), weak_boundary(0.75), strong_boundary(0.75, 2.0)
print(f"  detection needs r > {f}, approximate recovery r > {h}, exact recovery r > {g}")
print(f"  signal-strength ratios 1 : {h / f:g} : {g / f:g}")
print("  averaging m replicates boosts r by a factor m, so going from detection")
print("  to approximate recovery costs 3x samples, to exact recovery 9x.")

print()
print("Laplace tails flatten the curve: g(beta) = 2 - beta at nu = 1")
for beta in (0.25, 0.5, 0.75):
    print(f"  beta={beta}: g={strong_boundary(beta, 1.0):.4f}")

print()
print("the Gaussian curve straightens under beta_tilde = 2 - (1 + sqrt(1-beta))^2:")
for beta in np.linspace(0.76, 1.0, 4):
    bt = reparam(float(beta))
    print(f"  beta={beta:.2f} -> beta_tilde={bt:+.4f}, boundary 2 - beta_tilde = "
          f"{reparametrized_boundary(bt):.4f} = g = {strong_boundary(float(beta), 2.0):.4f}")
