"""
Dependence-structure diagnostics: covariance exceedance counts, the greedy
packing construction that witnesses them, an exact search for highly
correlated subsets, and concentration-of-maxima statistics.

The exceedance count N_p(delta) is the largest number of off-diagonal
entries above delta in any row of the covariance matrix; an array of growing
covariance matrices has uniformly decreasing dependence when these counts
stay bounded for every delta.  The packing routine certifies the complement:
it greedily extracts coordinates with pairwise covariance <= delta and its
size is at least floor(q / (N_p(delta) + 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .noise import NoiseModel
from .tails import TailFamily

__all__ = [
    "UddProfile",
    "udd_count",
    "udd_profile",
    "gamma_packing",
    "correlated_subset_search",
    "StabilitySummary",
    "stability_ratio",
    "cp_sequence",
    "ramsey_clique_bound_holds",
]


def _check_correlation_matrix(sigma) -> np.ndarray:
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("need a square matrix")
    if not np.allclose(s, s.T, atol=1e-8):
        raise ValueError("matrix must be symmetric")
    if not np.allclose(np.diag(s), 1.0, atol=1e-8):
        raise ValueError("matrix must have unit diagonal")
    return s


def udd_count(sigma, delta: float) -> int:
    """Largest per-row count of off-diagonal covariances exceeding delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    s = _check_correlation_matrix(sigma)
    exceed = (s > delta).sum(axis=1) - 1  # the unit diagonal always exceeds
    return int(exceed.max())


@dataclass(frozen=True)
class UddProfile:
    """Exceedance counts over a grid of thresholds (counts nonincreasing)."""

    delta_grid: tuple
    counts: tuple


def udd_profile(sigma, delta_grid) -> UddProfile:
    deltas = tuple(float(d) for d in delta_grid)
    return UddProfile(deltas, tuple(udd_count(sigma, d) for d in deltas))


def gamma_packing(sigma, delta: float) -> np.ndarray:
    """Greedy covariance packing: indices with pairwise covariance <= delta.

    Repeatedly take the smallest remaining index and discard everything whose
    covariance with it exceeds delta.  The result has at least
    floor(q / (udd_count + 1)) members, q the matrix dimension.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    s = _check_correlation_matrix(sigma)
    q = s.shape[0]
    alive = np.ones(q, dtype=bool)
    chosen = []
    while alive.any():
        j = int(np.argmax(alive))
        chosen.append(j)
        alive &= ~(s[j] > delta)  # the ball around j includes j itself
    return np.asarray(chosen, dtype=np.intp)


def correlated_subset_search(sigma, c: float, k: int) -> np.ndarray | None:
    """Exact search for k indices with all pairwise correlations > c^2 / 2.

    The matrix is (n+1) x (n+1) with anchor row 0 satisfying rho(0, j) > c for
    every j >= 1 (raised as a precondition error otherwise); the search runs
    over indices {1..n}.  Such a subset of size floor(log2(sqrt(n))) always
    exists once n >= 2^(2*ceil(2/c^2) + 4).  Returns None only when no subset
    of size k exists; deterministic (lexicographically first clique).
    """
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    if k < 1:
        raise ValueError("need k >= 1")
    s = _check_correlation_matrix(sigma)
    n = s.shape[0] - 1
    if n < 1:
        raise ValueError("need at least one non-anchor index")
    if not np.all(s[0, 1:] > c):
        raise ValueError("hypothesis violated: some rho(0, j) <= c")
    if k > n:
        return None

    adj = s[1:, 1:] > (c * c / 2.0)
    np.fill_diagonal(adj, False)

    def extend(clique: list[int], candidates: np.ndarray) -> list[int] | None:
        if len(clique) == k:
            return clique
        if len(clique) + candidates.size < k:
            return None
        for pos in range(candidates.size):
            v = int(candidates[pos])
            rest = candidates[pos + 1:]
            found = extend(clique + [v], rest[adj[v, rest]])
            if found is not None:
                return found
            if len(clique) + (candidates.size - pos - 1) < k:
                return None
        return None

    found = extend([], np.arange(n, dtype=np.intp))
    if found is None:
        return None
    return np.asarray(found, dtype=np.intp) + 1


@dataclass(frozen=True)
class StabilitySummary:
    """Across-replication summary of the normalized subset maxima."""

    mean: float
    median: float
    std: float
    q05: float
    q25: float
    q75: float
    q95: float
    ratios: np.ndarray


def stability_ratio(
    model: NoiseModel,
    family: TailFamily,
    p: int,
    subset_size: int,
    reps: int,
    rng: np.random.Generator,
    subset_indices=None,
) -> StabilitySummary:
    """Concentration statistic max_{j in S} eps(j) / u_{|S|} over replications.

    S is drawn uniformly at random each replication (or fixed when
    ``subset_indices`` is given); u_q is the (1/q)-th upper quantile of the
    marginal family.  With subset_size = p this is the plain relative
    stability statistic M_p / u_p.
    """
    if reps < 1:
        raise ValueError("need reps >= 1")
    if subset_indices is not None:
        subset_indices = np.asarray(subset_indices, dtype=np.intp)
        subset_size = subset_indices.size
    if not 2 <= subset_size <= p:
        raise ValueError("need 2 <= subset_size <= p")
    u = family.upper_quantile(subset_size)
    ratios = np.empty(reps)
    for i in range(reps):
        eps = model.sample(p, rng)
        if subset_indices is not None:
            sub = subset_indices
        elif subset_size == p:
            sub = slice(None)
        else:
            sub = rng.choice(p, subset_size, replace=False)
        ratios[i] = eps[sub].max() / u
    q05, q25, med, q75, q95 = np.quantile(ratios, [0.05, 0.25, 0.5, 0.75, 0.95])
    return StabilitySummary(
        mean=float(ratios.mean()),
        median=float(med),
        std=float(ratios.std(ddof=1)) if reps > 1 else 0.0,
        q05=float(q05),
        q25=float(q25),
        q75=float(q75),
        q95=float(q95),
        ratios=ratios,
    )


def cp_sequence(family: TailFamily, p: float) -> float:
    """Quantile-gap sequence u_{p log p} / u_p - 1 (positive, decreasing to 0)."""
    if p < 2:
        raise ValueError("need p >= 2")
    lp = math.log(p)
    return family.upper_quantile(p * lp) / family.upper_quantile(p) - 1.0


def ramsey_clique_bound_holds(n: int) -> bool:
    """Arithmetic fact behind the subset search: C(2k-2, k-1) <= n for
    k = floor(log2(sqrt(n))), so a graph on n vertices meets the Ramsey bound."""
    if n < 2:
        raise ValueError("need n >= 2")
    k = (int(n).bit_length() - 1) // 2
    if k < 1:
        return True
    return math.comb(2 * k - 2, k - 1) <= n
