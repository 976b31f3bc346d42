"""
Support estimators and recovery-error metrics.

Deterministic thresholds (Bonferroni, Sidak, and the slowly-vanishing-FWER
thresholds used in the simulation grids), data-dependent step procedures
(Holm step-down, Hochberg step-up), the known-sparsity top-s selectors
(plain order statistics and likelihood-ratio ordering), and the FDP / FNP /
Hamming / exact-recovery bookkeeping.

Every selector returns a :class:`SupportEstimate`.  All of them except the
likelihood-ratio selector produce an upper level set of the data: fixed and
calibrated thresholds select strict exceedances ``x > t``, the top-s selectors
use weak exceedance of the s-th order statistic, ties included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .tails import Gaussian, GeneralizedGaussian, Laplace, TailFamily, lambert_w

__all__ = [
    "SupportEstimate",
    "RecoveryMetrics",
    "Procedure",
    "bonferroni_threshold",
    "sidak_threshold",
    "agnostic_threshold",
    "block_adapted_threshold",
    "holm_select",
    "hochberg_select",
    "oracle_top_s",
    "likelihood_top_s",
    "apply",
    "metrics",
]


@dataclass(frozen=True)
class SupportEstimate:
    """Selected coordinate indices (0-based, sorted) and the threshold used."""

    selected: np.ndarray
    threshold: float | None = None

    def as_set(self) -> frozenset:
        return frozenset(int(j) for j in self.selected)

    def __len__(self) -> int:
        return int(self.selected.size)


@dataclass(frozen=True)
class RecoveryMetrics:
    """Per-trial error summary of an estimate against the true support."""

    exact: bool
    false_inclusion: bool
    fdp: float
    fnp: float
    hamming: int


# ---------------------------------------------------------------------------
# Deterministic thresholds
# ---------------------------------------------------------------------------


def bonferroni_threshold(family: TailFamily, p: int, alpha: float) -> float:
    """Threshold F^{-1}(1 - alpha/p): controls the FWER at level alpha."""
    if p < 1:
        raise ValueError("need p >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return float(family.quantile(1.0 - alpha / p))


def sidak_threshold(family: TailFamily, p: int, alpha: float) -> float:
    """Threshold F^{-1}((1 - alpha)^{1/p}): exact FWER alpha under independence."""
    if p < 1:
        raise ValueError("need p >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return float(family.quantile((1.0 - alpha) ** (1.0 / p)))


def agnostic_threshold(family: TailFamily, p: int, gg_constant: float = 1.0) -> float:
    """Sparsity- and signal-agnostic threshold with slowly vanishing FWER.

    Gaussian: sqrt(2 log p); Laplace: log p + (log log p)/2; generalized
    Gaussian with nu = 1/2: (W_{-1}(-gg_constant/(e p log p)) + 1)^2 / 4,
    where W_{-1} is the lower real branch of the Lambert W function (the only
    branch that yields a growing positive threshold).  The constant in the
    W argument is not pinned down by theory; it defaults to 1.
    """
    if p < 2:
        raise ValueError("need p >= 2")
    lp = math.log(p)
    if isinstance(family, Gaussian):
        return math.sqrt(2.0 * lp)
    if isinstance(family, Laplace):
        return lp + 0.5 * math.log(lp)
    if isinstance(family, GeneralizedGaussian) and family.nu == 0.5:
        w = lambert_w(-gg_constant / (math.e * p * lp), branch=-1)
        return 0.25 * (w + 1.0) ** 2
    raise ValueError("no agnostic threshold defined for this family")


def block_adapted_threshold(p: int, beta: float) -> float:
    """sqrt(2 (1-beta) log p): calibrated to floor(p^{1-beta}) free Gaussian values."""
    if p < 2:
        raise ValueError("need p >= 2")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    return math.sqrt(2.0 * (1.0 - beta) * math.log(p))


# ---------------------------------------------------------------------------
# Selectors
# ---------------------------------------------------------------------------


def _level_set(x: np.ndarray, t: float, strict: bool) -> np.ndarray:
    return np.flatnonzero(x > t) if strict else np.flatnonzero(x >= t)


def _step_rule_k(x: np.ndarray, family: TailFamily, alpha: float, step_up: bool) -> tuple[int, np.ndarray]:
    """Shared Holm/Hochberg machinery: returns (k, descending-sorted x)."""
    x = np.asarray(x, dtype=float)
    p = x.size
    xs = np.sort(x)[::-1]
    pvals = np.asarray(family.survival(xs))
    caps = alpha / (p - np.arange(p))
    ok = pvals <= caps
    if step_up:
        hits = np.flatnonzero(ok)
        k = int(hits[-1]) + 1 if hits.size else 0
    else:
        k = p if bool(ok.all()) else int(np.argmax(~ok))
    return k, xs


def holm_select(x, family: TailFamily, alpha: float) -> SupportEstimate:
    """Step-down selection: top-k order statistics with k the largest index
    such that every sorted tail probability up to k clears alpha/(p-i+1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    x = np.asarray(x, dtype=float)
    k, xs = _step_rule_k(x, family, alpha, step_up=False)
    if k == 0:
        return SupportEstimate(np.empty(0, dtype=np.intp), None)
    t = float(xs[k - 1])
    return SupportEstimate(_level_set(x, t, strict=False), t)


def hochberg_select(x, family: TailFamily, alpha: float) -> SupportEstimate:
    """Step-up variant: k is the largest single index clearing alpha/(p-i+1);
    never selects less than Holm at the same level."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    x = np.asarray(x, dtype=float)
    k, xs = _step_rule_k(x, family, alpha, step_up=True)
    if k == 0:
        return SupportEstimate(np.empty(0, dtype=np.intp), None)
    t = float(xs[k - 1])
    return SupportEstimate(_level_set(x, t, strict=False), t)


def oracle_top_s(x, s: int) -> SupportEstimate:
    """All coordinates >= the s-th largest value (ties included)."""
    x = np.asarray(x, dtype=float)
    p = x.size
    if not 1 <= s <= p:
        raise ValueError("need 1 <= s <= p")
    t = float(np.partition(x, p - s)[p - s])
    return SupportEstimate(_level_set(x, t, strict=False), t)


def likelihood_top_s(
    x,
    null_logpdf: Callable[[np.ndarray], np.ndarray],
    alt_logpdf: Callable[[np.ndarray], np.ndarray],
    s: int,
) -> SupportEstimate:
    """Top-s coordinates by likelihood ratio alt/null (ties included).

    Coincides with :func:`oracle_top_s` whenever the ratio is increasing in x
    (log-concave error density); differs for heavy-shouldered densities such
    as the generalized Gaussian with nu < 1.
    """
    x = np.asarray(x, dtype=float)
    p = x.size
    if not 1 <= s <= p:
        raise ValueError("need 1 <= s <= p")
    logl = np.asarray(alt_logpdf(x), dtype=float) - np.asarray(null_logpdf(x), dtype=float)
    t = float(np.partition(logl, p - s)[p - s])
    return SupportEstimate(np.flatnonzero(logl >= t), None)


# ---------------------------------------------------------------------------
# Procedure objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Procedure:
    """A support estimator; build via the class constructors below."""

    kind: str
    family: TailFamily | None = None
    alpha: float | None = None
    threshold: float | None = None
    s: int | None = None
    null_logpdf: Callable | None = None
    alt_logpdf: Callable | None = None

    @classmethod
    def fixed(cls, threshold: float) -> "Procedure":
        return cls(kind="fixed", threshold=float(threshold))

    @classmethod
    def bonferroni(cls, family: TailFamily, alpha: float) -> "Procedure":
        return cls(kind="bonferroni", family=family, alpha=alpha)

    @classmethod
    def sidak(cls, family: TailFamily, alpha: float) -> "Procedure":
        return cls(kind="sidak", family=family, alpha=alpha)

    @classmethod
    def holm(cls, family: TailFamily, alpha: float) -> "Procedure":
        return cls(kind="holm", family=family, alpha=alpha)

    @classmethod
    def hochberg(cls, family: TailFamily, alpha: float) -> "Procedure":
        return cls(kind="hochberg", family=family, alpha=alpha)

    @classmethod
    def oracle(cls, s: int) -> "Procedure":
        return cls(kind="oracle", s=int(s))

    @classmethod
    def likelihood(cls, s: int, null_logpdf: Callable, alt_logpdf: Callable) -> "Procedure":
        return cls(kind="likelihood", s=int(s), null_logpdf=null_logpdf, alt_logpdf=alt_logpdf)


def apply(proc: Procedure, x) -> SupportEstimate:
    """Run a procedure on one data vector."""
    x = np.asarray(x, dtype=float)
    if proc.kind == "fixed":
        return SupportEstimate(_level_set(x, proc.threshold, strict=True), proc.threshold)
    if proc.kind == "bonferroni":
        t = bonferroni_threshold(proc.family, x.size, proc.alpha)
        return SupportEstimate(_level_set(x, t, strict=True), t)
    if proc.kind == "sidak":
        t = sidak_threshold(proc.family, x.size, proc.alpha)
        return SupportEstimate(_level_set(x, t, strict=True), t)
    if proc.kind == "holm":
        return holm_select(x, proc.family, proc.alpha)
    if proc.kind == "hochberg":
        return hochberg_select(x, proc.family, proc.alpha)
    if proc.kind == "oracle":
        return oracle_top_s(x, proc.s)
    if proc.kind == "likelihood":
        return likelihood_top_s(x, proc.null_logpdf, proc.alt_logpdf, proc.s)
    raise ValueError(f"unknown procedure kind {proc.kind!r}")


# ---------------------------------------------------------------------------
# Error metrics
# ---------------------------------------------------------------------------


def metrics(est: SupportEstimate, truth) -> RecoveryMetrics:
    """FDP, FNP, Hamming mismatch count, and the exact / false-inclusion flags.

    Conventions: FDP is 0 when nothing is selected, FNP is 0 when the true
    support is empty.
    """
    sel = est.as_set() if isinstance(est, SupportEstimate) else frozenset(int(j) for j in est)
    tru = frozenset(int(j) for j in truth)
    false_pos = len(sel - tru)
    false_neg = len(tru - sel)
    fdp = false_pos / len(sel) if sel else 0.0
    fnp = false_neg / len(tru) if tru else 0.0
    return RecoveryMetrics(
        exact=(false_pos == 0 and false_neg == 0),
        false_inclusion=false_pos > 0,
        fdp=fdp,
        fnp=fnp,
        hamming=false_pos + false_neg,
    )
