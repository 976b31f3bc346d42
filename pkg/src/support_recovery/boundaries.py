"""
Closed-form phase-transition boundaries and the sparsity/signal-size
parametrization of the sparse-mean model.

All boundaries are expressed in the signal-strength parameter r, where
signals have magnitude (nu * r * log p)^{1/nu} and sparsity s = floor(p^{1-beta}):

- ``strong_boundary``       exact support recovery threshold (any nu > 0),
- ``weak_boundary``         vanishing FDP + FNP threshold (identity in beta),
- ``detection_boundary``    global-null testing threshold (Gaussian case),
- ``non_udd_boundary``      4(1-beta), attainable by the perfectly-correlated
                            block construction that breaks uniform dependence
                            decay,
- ``reparam``/``reparametrized_boundary``  the change of sparsity variable
                            under which the Gaussian strong boundary becomes
                            the line 2 - beta_tilde,
- ``heavier_than_agg_params``/``lighter_than_agg_params``  sparsity and
                            magnitude scalings for tails heavier/lighter than
                            the AGG class (boundary 2 - beta in both).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SignalConfig",
    "strong_boundary",
    "detection_boundary",
    "weak_boundary",
    "non_udd_boundary",
    "reparam",
    "reparametrized_boundary",
    "heavier_than_agg_params",
    "lighter_than_agg_params",
    "signal_magnitude",
    "sparsity_count",
]


def sparsity_count(p: int, beta: float) -> int:
    """Number of signals s = floor(p^(1-beta)); beta = 0 is the dense edge s = p."""
    if p < 2:
        raise ValueError("need dimension p >= 2")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("sparsity exponent beta must lie in [0, 1]")
    return int(math.floor(p ** (1.0 - beta)))


def signal_magnitude(nu: float, r: float, p: float) -> float:
    """Signal size (nu * r * log p)^{1/nu}."""
    if not nu > 0.0:
        raise ValueError("shape nu must be positive")
    if not r > 0.0:
        raise ValueError("signal strength r must be positive")
    if p < 2:
        raise ValueError("need p >= 2")
    return (nu * r * math.log(p)) ** (1.0 / nu)


@dataclass(frozen=True)
class SignalConfig:
    """Dimension, sparsity exponent, and signal-strength parameters."""

    p: int
    beta: float
    r_low: float
    r_high: float | None = None
    nu: float = 2.0

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need dimension p >= 2")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("sparsity exponent beta must lie in (0, 1]")
        if not self.r_low > 0.0:
            raise ValueError("r_low must be positive")
        r_high = self.r_low if self.r_high is None else self.r_high
        if r_high < self.r_low:
            raise ValueError("need r_low <= r_high")
        if not self.nu > 0.0:
            raise ValueError("shape nu must be positive")
        object.__setattr__(self, "r_high", r_high)

    @property
    def s(self) -> int:
        return sparsity_count(self.p, self.beta)

    @property
    def delta_low(self) -> float:
        return signal_magnitude(self.nu, self.r_low, self.p)

    @property
    def delta_high(self) -> float:
        return signal_magnitude(self.nu, self.r_high, self.p)


def strong_boundary(beta: float, nu: float) -> float:
    """g(beta) = (1 + (1 - beta)^{1/nu})^nu, decreasing from 2^nu to 1."""
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    if not nu > 0.0:
        raise ValueError("shape nu must be positive")
    return (1.0 + (1.0 - beta) ** (1.0 / nu)) ** nu


def detection_boundary(beta: float) -> float:
    """Gaussian signal-detection threshold; defined for beta in (1/2, 1]."""
    if not 0.5 < beta <= 1.0:
        raise ValueError("detection boundary is defined for beta in (1/2, 1]")
    if beta >= 0.75:
        return (1.0 - math.sqrt(1.0 - beta)) ** 2
    return beta - 0.5


def weak_boundary(beta: float) -> float:
    """Approximate-recovery threshold: the identity on (0, 1]."""
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    return beta


def non_udd_boundary(beta: float) -> float:
    """4(1 - beta): recovery threshold of the perfectly-correlated block model."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    return 4.0 * (1.0 - beta)


def reparam(beta: float) -> float:
    """Sparsity variable beta_tilde = 2 - (1 + sqrt(1-beta))^2 (Gaussian case).

    Evaluated as written; note beta_tilde leaves (0, 1) for beta < 3/4.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    return 2.0 - (1.0 + math.sqrt(1.0 - beta)) ** 2


def reparametrized_boundary(beta_tilde: float) -> float:
    """Strong boundary in the reparametrized variable: 2 - beta_tilde."""
    return 2.0 - beta_tilde


def heavier_than_agg_params(p: int, beta: float, gamma: float, r: float) -> tuple[int, float]:
    """Sparsity count and signal magnitude for log-survival -c (log x)^gamma tails.

    Returns (s, delta) with s = floor(p * exp(-k)), k = log p - ((log p)^{1/gamma}
    + log(1-beta))^gamma, and delta = exp((log p)^{1/gamma}) * r.  The recovery
    boundary under this scaling is r = 2 - beta.
    """
    if p < 2:
        raise ValueError("need p >= 2")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    if not gamma >= 1.0:
        raise ValueError("need gamma >= 1 (gamma = 1 is the algebraic edge case)")
    if not r > 0.0:
        raise ValueError("signal strength r must be positive")
    lp = math.log(p)
    base = lp ** (1.0 / gamma) + math.log(1.0 - beta)
    if base <= 0.0:
        raise ValueError("quantile scale collapses: (log p)^{1/gamma} + log(1-beta) <= 0")
    k = lp - base ** gamma
    s = int(math.floor(p * math.exp(-k)))
    delta = math.exp(lp ** (1.0 / gamma)) * r
    return s, delta


def lighter_than_agg_params(p: int, beta: float, nu: float, r: float) -> tuple[int, float]:
    """Sparsity count and signal magnitude for log-survival -exp(x^nu) tails.

    Returns (s, delta) with s = floor(p * exp(-k)), k = log p - (log p)^{(1-beta)^nu},
    and delta = (log log p)^{1/nu} * r.  The recovery boundary is again r = 2 - beta.
    """
    if p < 3:
        raise ValueError("need p >= 3 so that log log p > 0")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    if not nu > 0.0:
        raise ValueError("shape nu must be positive")
    if not r > 0.0:
        raise ValueError("signal strength r must be positive")
    lp = math.log(p)
    k = lp - lp ** ((1.0 - beta) ** nu)
    s = int(math.floor(p * math.exp(-k)))
    delta = math.log(lp) ** (1.0 / nu) * r
    return s, delta
