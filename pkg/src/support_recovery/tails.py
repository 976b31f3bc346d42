"""
Marginal error-distribution models for the signal-plus-noise simulations.

Every family exposes the same surface:

- ``survival(x)``      upper tail probability P[X > x], vectorized,
- ``log_survival(x)``  accurate log tail even where the linear value underflows,
- ``quantile(q)``      generalized inverse F^{-1}(q) = inf{x : F(x) >= q},
- ``sample(n, rng)``   iid draws, deterministic given the numpy Generator.

Concrete families
-----------------
Gaussian              standard normal, density (2*pi)^{-1/2} exp(-x^2/2)
Laplace               density (1/2) exp(-|x|)
GeneralizedGaussian   density exp(-|x|^nu / nu) / (2 nu^{1/nu - 1} Gamma(1/nu));
                      nu=2 is the standard normal and nu=1 the unit Laplace
AggAsymptotic         survival exactly exp(-x^nu/nu) on the upper tail, so the
                      upper quantiles are exactly (nu log p)^{1/nu}
HeavierThanAgg        log survival exactly -c (log x)^gamma on the upper tail
LighterThanAgg        log survival exactly -exp(x^nu) on the upper tail
Pareto                two-sided power tail, survival exactly x^{-alpha} on the
                      upper tail and F(-x) = x^{-alpha} on the lower tail

The last four are synthetic laws pinned down only by their tails: the stated
closed form holds wherever the tail probability is <= 1/4, the two tails are
joined by a uniform (linear-CDF) bridge between the quartile points, so the
survival function is continuous and strictly decreasing on all of R and
inverse-CDF sampling is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "TailFamily",
    "Gaussian",
    "Laplace",
    "GeneralizedGaussian",
    "AggAsymptotic",
    "HeavierThanAgg",
    "LighterThanAgg",
    "Pareto",
    "asymptotic_quantile",
    "lambert_w",
]

_LOG_HALF = math.log(0.5)


def _validate_prob(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise ValueError("probability must lie strictly inside (0, 1)")
    return q


class TailFamily:
    """Common interface; concrete families are frozen dataclasses below."""

    #: AGG tail-shape parameter nu when the family has one, else None.
    agg_shape: float | None = None

    # -- tail surface -------------------------------------------------------

    def survival(self, x):
        """Upper tail probability P[X > x]."""
        raise NotImplementedError

    def log_survival(self, x):
        """log P[X > x], accurate far beyond float underflow of survival()."""
        raise NotImplementedError

    def quantile(self, q):
        """Generalized inverse: smallest x with F(x) >= q, q in (0, 1)."""
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n iid draws using the caller-owned generator."""
        raise NotImplementedError

    def isf(self, s):
        """Inverse survival: the x with survival(x) = s, s in (0, 1).

        Equivalent to quantile(1 - s) but computed in survival space, so tiny
        tail probabilities are not squeezed through the resolution of 1 - s.
        """
        s = _validate_prob(s)
        return self.quantile(1.0 - s) if s.ndim else float(self.quantile(1.0 - s))

    # -- convenience --------------------------------------------------------

    def upper_quantile(self, p: float) -> float:
        """u_p = F^{-1}(1 - 1/p), the (1/p)-th upper quantile (p > 1)."""
        if p <= 1.0:
            raise ValueError("upper quantile needs p > 1")
        return float(self.isf(1.0 / p))

    def cdf(self, x):
        return 1.0 - self.survival(x)


def _as_scalar_or_array(values: np.ndarray, scalar_input: bool):
    if scalar_input:
        return float(values[()] if values.ndim == 0 else values)
    return values


# ---------------------------------------------------------------------------
# Exact-density families (Gaussian / Laplace / generalized Gaussian)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gaussian(TailFamily):
    """Standard normal errors."""

    agg_shape = 2.0

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        return _as_scalar_or_array(sp.ndtr(-x), x.ndim == 0)

    def log_survival(self, x):
        x = np.asarray(x, dtype=float)
        return _as_scalar_or_array(sp.log_ndtr(-x), x.ndim == 0)

    def quantile(self, q):
        q = _validate_prob(q)
        return _as_scalar_or_array(sp.ndtri(q), q.ndim == 0)

    def isf(self, s):
        s = _validate_prob(s)
        return _as_scalar_or_array(-sp.ndtri(s), s.ndim == 0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 1:
            raise ValueError("need n >= 1")
        return rng.standard_normal(n)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        return -0.5 * x * x - 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Laplace(TailFamily):
    """Double-exponential errors, density (1/2) exp(-|x|)."""

    agg_shape = 1.0

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0.0, 0.5 * np.exp(-np.abs(x)), 1.0 - 0.5 * np.exp(-np.abs(x)))
        return _as_scalar_or_array(out, x.ndim == 0)

    def log_survival(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0.0, _LOG_HALF - np.abs(x), np.log1p(-0.5 * np.exp(-np.abs(x))))
        return _as_scalar_or_array(out, x.ndim == 0)

    def quantile(self, q):
        q = _validate_prob(q)
        out = np.where(q >= 0.5, -np.log(2.0 * (1.0 - q)), np.log(2.0 * q))
        return _as_scalar_or_array(out, q.ndim == 0)

    def isf(self, s):
        s = _validate_prob(s)
        out = np.where(s <= 0.5, -np.log(2.0 * s), np.log(2.0 * (1.0 - s)))
        return _as_scalar_or_array(out, s.ndim == 0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 1:
            raise ValueError("need n >= 1")
        return rng.laplace(0.0, 1.0, n)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        return -np.abs(x) - math.log(2.0)


def _log_gammaincc(a: float, t: np.ndarray) -> np.ndarray:
    """log of the regularized upper incomplete gamma Q(a, t).

    Uses scipy in the representable range and the Numerical-Recipes-style
    continued fraction assembled in log space once Q(a, t) underflows.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    q = sp.gammaincc(a, t)
    out = np.empty_like(t)
    ok = q > 1e-290
    out[ok] = np.log(q[ok])
    for i in np.nonzero(~ok)[0]:
        ti = float(t[i])
        # modified Lentz evaluation of the CF for Gamma(a, t) * exp(t) * t^{-a}
        tiny = 1e-300
        b = ti + 1.0 - a
        c = 1.0 / tiny
        d = 1.0 / b
        h = d
        for k in range(1, 200):
            an = -k * (k - a)
            b += 2.0
            d = an * d + b
            if abs(d) < tiny:
                d = tiny
            c = b + an / c
            if abs(c) < tiny:
                c = tiny
            d = 1.0 / d
            delta = d * c
            h *= delta
            if abs(delta - 1.0) < 1e-16:
                break
        out[i] = -ti + a * math.log(ti) - math.lgamma(a) + math.log(h)
    return out


@dataclass(frozen=True)
class GeneralizedGaussian(TailFamily):
    """Symmetric density proportional to exp(-|x|^nu / nu), nu > 0.

    The normalizing constant is 1 / (2 nu^{1/nu-1} Gamma(1/nu)); survival
    values are (1/2) Q(1/nu, |x|^nu / nu) on the upper half line, with Q the
    regularized upper incomplete gamma function.
    """

    nu: float

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError("shape nu must be positive")

    @property
    def agg_shape(self) -> float:
        return self.nu

    @property
    def _log_norm(self) -> float:
        # log of 2 * nu^{1/nu - 1} * Gamma(1/nu)
        a = 1.0 / self.nu
        return math.log(2.0) + (a - 1.0) * math.log(self.nu) + math.lgamma(a)

    def _t(self, x: np.ndarray) -> np.ndarray:
        return np.abs(x) ** self.nu / self.nu

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        half_tail = 0.5 * sp.gammaincc(1.0 / self.nu, self._t(x))
        out = np.where(x >= 0.0, half_tail, 1.0 - half_tail)
        return _as_scalar_or_array(out, x.ndim == 0)

    def log_survival(self, x):
        x = np.asarray(x, dtype=float)
        xv = np.atleast_1d(x)
        out = np.empty_like(xv)
        pos = xv >= 0.0
        if np.any(pos):
            out[pos] = _LOG_HALF + _log_gammaincc(1.0 / self.nu, self._t(xv[pos]))
        if np.any(~pos):
            q = sp.gammaincc(1.0 / self.nu, self._t(xv[~pos]))
            out[~pos] = np.log1p(-0.5 * q)
        return _as_scalar_or_array(out.reshape(x.shape), x.ndim == 0)

    def quantile(self, q):
        q = _validate_prob(q)
        qv = np.atleast_1d(q)
        a = 1.0 / self.nu
        upper = qv >= 0.5
        out = np.empty_like(qv)
        if np.any(upper):
            t = sp.gammainccinv(a, 2.0 * (1.0 - qv[upper]))
            out[upper] = (self.nu * t) ** (1.0 / self.nu)
        if np.any(~upper):
            t = sp.gammainccinv(a, 2.0 * qv[~upper])
            out[~upper] = -((self.nu * t) ** (1.0 / self.nu))
        return _as_scalar_or_array(out.reshape(q.shape), q.ndim == 0)

    def isf(self, s):
        s = _validate_prob(s)
        sv = np.atleast_1d(s)
        a = 1.0 / self.nu
        upper = sv <= 0.5
        out = np.empty_like(sv)
        if np.any(upper):
            t = sp.gammainccinv(a, 2.0 * sv[upper])
            out[upper] = (self.nu * t) ** (1.0 / self.nu)
        if np.any(~upper):
            t = sp.gammainccinv(a, 2.0 * (1.0 - sv[~upper]))
            out[~upper] = -((self.nu * t) ** (1.0 / self.nu))
        return _as_scalar_or_array(out.reshape(s.shape), s.ndim == 0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 1:
            raise ValueError("need n >= 1")
        # |X|^nu / nu ~ Gamma(1/nu), so |X| = (nu G)^{1/nu}; attach a fair sign
        mag = (self.nu * rng.standard_gamma(1.0 / self.nu, n)) ** (1.0 / self.nu)
        sign = rng.integers(0, 2, n) * 2 - 1
        return sign * mag

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        return -self._t(x) - self._log_norm


# ---------------------------------------------------------------------------
# Tail-pinned synthetic families (exact closed-form tails, uniform bridge)
# ---------------------------------------------------------------------------


class _BridgedFamily(TailFamily):
    """Symmetric law with exact tail formulas beyond the quartile points.

    Subclasses provide the upper-tail survival (valid wherever it is <= 1/4),
    its log, and its inverse; the lower tail is the mirror image and the
    central half of the mass is uniform between -x1 and x1, where x1 is the
    point with tail probability exactly 1/4.
    """

    def _tail_sf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _tail_log_sf(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _tail_quantile(self, s: np.ndarray) -> np.ndarray:
        """Inverse of _tail_sf for s in (0, 1/4]."""
        raise NotImplementedError

    @property
    def _x1(self) -> float:
        return float(self._tail_quantile(np.asarray(0.25)))

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        xv = np.atleast_1d(x)
        x1 = self._x1
        out = np.empty_like(xv)
        hi = xv >= x1
        lo = xv <= -x1
        mid = ~(hi | lo)
        if np.any(hi):
            out[hi] = self._tail_sf(xv[hi])
        if np.any(lo):
            out[lo] = 1.0 - self._tail_sf(-xv[lo])
        if np.any(mid):
            out[mid] = 0.5 - xv[mid] / (4.0 * x1)
        return _as_scalar_or_array(out.reshape(x.shape), x.ndim == 0)

    def log_survival(self, x):
        x = np.asarray(x, dtype=float)
        xv = np.atleast_1d(x)
        out = np.empty_like(xv)
        hi = xv >= self._x1
        if np.any(hi):
            out[hi] = self._tail_log_sf(xv[hi])
        if np.any(~hi):
            out[~hi] = np.log(np.atleast_1d(self.survival(xv[~hi])))
        return _as_scalar_or_array(out.reshape(x.shape), x.ndim == 0)

    def quantile(self, q):
        q = _validate_prob(q)
        qv = np.atleast_1d(q)
        x1 = self._x1
        out = np.empty_like(qv)
        hi = qv >= 0.75
        lo = qv <= 0.25
        mid = ~(hi | lo)
        if np.any(hi):
            out[hi] = self._tail_quantile(1.0 - qv[hi])
        if np.any(lo):
            out[lo] = -self._tail_quantile(qv[lo])
        if np.any(mid):
            out[mid] = 4.0 * x1 * (qv[mid] - 0.5)
        return _as_scalar_or_array(out.reshape(q.shape), q.ndim == 0)

    def isf(self, s):
        s = _validate_prob(s)
        sv = np.atleast_1d(s)
        x1 = self._x1
        out = np.empty_like(sv)
        hi = sv <= 0.25
        lo = sv >= 0.75
        mid = ~(hi | lo)
        if np.any(hi):
            out[hi] = self._tail_quantile(sv[hi])
        if np.any(lo):
            out[lo] = -self._tail_quantile(1.0 - sv[lo])
        if np.any(mid):
            out[mid] = 4.0 * x1 * (0.5 - sv[mid])
        return _as_scalar_or_array(out.reshape(s.shape), s.ndim == 0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 1:
            raise ValueError("need n >= 1")
        return np.asarray(self.quantile(rng.uniform(0.0, 1.0, n)))


@dataclass(frozen=True)
class AggAsymptotic(_BridgedFamily):
    """Tail law with survival exactly exp(-x^nu/nu) for survival <= 1/4.

    Upper quantiles are exactly (nu log p)^{1/nu} for all p >= 4, which makes
    asymptotic-quantile identities hold with no finite-size slack.
    """

    nu: float

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError("shape nu must be positive")

    @property
    def agg_shape(self) -> float:
        return self.nu

    def _tail_sf(self, x):
        return np.exp(-(x ** self.nu) / self.nu)

    def _tail_log_sf(self, x):
        return -(x ** self.nu) / self.nu

    def _tail_quantile(self, s):
        return (self.nu * np.log(1.0 / s)) ** (1.0 / self.nu)


@dataclass(frozen=True)
class Pareto(_BridgedFamily):
    """Two-sided power-law tails: survival exactly x^{-alpha} above 4^{1/alpha}."""

    tail_index: float

    def __post_init__(self):
        if not self.tail_index > 0.0:
            raise ValueError("tail_index must be positive")

    def _tail_sf(self, x):
        return x ** (-self.tail_index)

    def _tail_log_sf(self, x):
        return -self.tail_index * np.log(x)

    def _tail_quantile(self, s):
        return s ** (-1.0 / self.tail_index)


@dataclass(frozen=True)
class HeavierThanAgg(_BridgedFamily):
    """Sub-power tails: log survival exactly -c (log x)^gamma, gamma > 1."""

    gamma: float
    c: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if not self.c > 0.0:
            raise ValueError("c must be positive")

    def _tail_sf(self, x):
        return np.exp(self._tail_log_sf(x))

    def _tail_log_sf(self, x):
        return -self.c * np.log(x) ** self.gamma

    def _tail_quantile(self, s):
        return np.exp((np.log(1.0 / s) / self.c) ** (1.0 / self.gamma))


@dataclass(frozen=True)
class LighterThanAgg(_BridgedFamily):
    """Doubly exponential tails: log survival exactly -exp(x^nu)."""

    nu: float

    def __post_init__(self):
        if not self.nu > 0.0:
            raise ValueError("shape nu must be positive")

    def _tail_sf(self, x):
        return np.exp(self._tail_log_sf(x))

    def _tail_log_sf(self, x):
        return -np.exp(x ** self.nu)

    def _tail_quantile(self, s):
        return np.log(np.log(1.0 / s)) ** (1.0 / self.nu)


# ---------------------------------------------------------------------------
# Quantile asymptotics and the Lambert W function
# ---------------------------------------------------------------------------


def asymptotic_quantile(nu: float, p: float) -> float:
    """Leading-order upper quantile (nu log p)^{1/nu} of an AGG(nu) law."""
    if not nu > 0.0:
        raise ValueError("shape nu must be positive")
    if p < 2:
        raise ValueError("need p >= 2")
    return (nu * math.log(p)) ** (1.0 / nu)


_BRANCH_POINT = -1.0 / math.e


def lambert_w(x: float, branch: int = 0) -> float:
    """Real Lambert W: solve w * exp(w) = x on the requested branch.

    branch 0 is the principal branch (w >= -1, defined for x >= -1/e);
    branch -1 is the lower branch (w <= -1, defined for -1/e <= x < 0).
    Halley iteration from a branch-appropriate starting point; the result
    satisfies w*exp(w) = x to ~1e-14 relative.
    """
    x = float(x)
    if branch not in (0, -1):
        raise ValueError("branch must be 0 or -1")
    if x < _BRANCH_POINT - 1e-12 * max(1.0, abs(x)):
        raise ValueError("lambert_w is real only for x >= -1/e")
    if branch == -1 and x >= 0.0:
        raise ValueError("branch -1 requires -1/e <= x < 0")

    # branch point: both branches meet at -1
    ex1 = max(math.e * x + 1.0, 0.0)
    if ex1 < 1e-28:
        return -1.0

    if branch == 0:
        if x < -0.25:
            pser = math.sqrt(2.0 * ex1)
            w = -1.0 + pser * (1.0 - pser * (1.0 / 3.0 - 11.0 / 72.0 * pser))
        elif x < 3.0:
            w = math.log1p(x)
        else:
            lx = math.log(x)
            w = lx - math.log(lx)
    else:
        if x < -0.25:
            pser = -math.sqrt(2.0 * ex1)
            w = -1.0 + pser * (1.0 - pser * (1.0 / 3.0 - 11.0 / 72.0 * pser))
        else:
            lx = math.log(-x)
            w = lx - math.log(-lx)

    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        if w1 == 0.0:
            break
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w
