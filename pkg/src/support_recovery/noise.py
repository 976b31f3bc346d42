"""
Error-vector generators for every dependence structure used in the
simulation grids, plus exact covariance matrices for the diagnostics.

All Gaussian models produce standard-normal marginals (zero mean, unit
variance); covariance matrices have unit diagonal.

Models
------
IID                   independent draws from any marginal tail family
AR1                   stationary first-order autoregression, cov rho^{|i-j|}
FGN                   fractional Gaussian noise with Hurst parameter H,
                      exact sampling by circulant embedding of the
                      autocovariance (nonnegative embedding for all H)
BlockEquicorrelated   floor(p^{1-beta}) blocks of perfectly correlated
                      coordinates, independent across blocks; the canonical
                      violation of uniformly decreasing dependence
ExplicitCovariance    dense N(0, Sigma) sampling via symmetric factorization
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import lfilter

from .tails import TailFamily

__all__ = [
    "NoiseModel",
    "IID",
    "AR1",
    "FGN",
    "BlockEquicorrelated",
    "ExplicitCovariance",
    "fgn_autocovariance",
    "block_count",
    "block_labels",
]

_DENSE_CAP = 2000


class NoiseModel:
    """Sampling plus exact covariance; concrete models are dataclasses below."""

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def covariance(self, p: int) -> np.ndarray:
        raise NotImplementedError


def _check_dense(p: int) -> None:
    if p > _DENSE_CAP:
        raise ValueError(f"dense covariance output is capped at p = {_DENSE_CAP}")


@dataclass(frozen=True)
class IID(NoiseModel):
    """Independent errors with the given marginal family."""

    family: TailFamily

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        if p < 1:
            raise ValueError("need p >= 1")
        return self.family.sample(p, rng)

    def covariance(self, p: int) -> np.ndarray:
        _check_dense(p)
        return np.eye(p)


@dataclass(frozen=True)
class AR1(NoiseModel):
    """Stationary Gaussian AR(1): eps(j) = rho*eps(j-1) + sqrt(1-rho^2)*z(j)."""

    rho: float

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise ValueError("need |rho| < 1 for stationarity")

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        if p < 1:
            raise ValueError("need p >= 1")
        innov = rng.standard_normal(p)
        innov[1:] *= math.sqrt(1.0 - self.rho * self.rho)
        return lfilter([1.0], [1.0, -self.rho], innov)

    def covariance(self, p: int) -> np.ndarray:
        _check_dense(p)
        return toeplitz(self.rho ** np.arange(p))


def fgn_autocovariance(hurst: float, lags) -> np.ndarray:
    """Exact fGn autocovariance 0.5(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H})."""
    if not 0.0 < hurst < 1.0:
        raise ValueError("Hurst parameter must lie in (0, 1)")
    k = np.abs(np.asarray(lags, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k ** h2 + np.abs(k - 1.0) ** h2)


@lru_cache(maxsize=32)
def _fgn_spectrum(hurst: float, p: int) -> np.ndarray:
    """Eigenvalues of the circulant embedding, padded to a power of two.

    The covariance sequence is extended to m >= p true lags so the padded
    circulant still embeds the target covariance exactly; fGn embeddings are
    nonnegative, so anything below -1e-9 signals a real failure.
    """
    m = 1 << max(1, (p - 1)).bit_length()
    acf = fgn_autocovariance(hurst, np.arange(m + 1))
    row = np.concatenate([acf, acf[-2:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -1e-9:
        raise RuntimeError("circulant embedding produced negative eigenvalues")
    eig = np.clip(eig, 0.0, None)
    eig.flags.writeable = False
    return eig


@dataclass(frozen=True)
class FGN(NoiseModel):
    """Fractional Gaussian noise; exact in distribution via circulant embedding."""

    hurst: float

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError("Hurst parameter must lie in (0, 1)")

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        if p < 1:
            raise ValueError("need p >= 1")
        eig = _fgn_spectrum(self.hurst, p)
        n = eig.size  # 2m
        m = n // 2
        z = np.empty(n, dtype=complex)
        z[0] = rng.standard_normal()
        z[m] = rng.standard_normal()
        v = rng.standard_normal((m - 1, 2))
        z[1:m] = (v[:, 0] + 1j * v[:, 1]) / math.sqrt(2.0)
        z[m + 1:] = np.conj(z[1:m][::-1])
        x = np.fft.ifft(np.sqrt(eig) * z) * math.sqrt(n)
        return x.real[:p]

    def covariance(self, p: int) -> np.ndarray:
        _check_dense(p)
        return toeplitz(fgn_autocovariance(self.hurst, np.arange(p)))


def block_count(p: int, beta: float) -> int:
    """Number of blocks floor(p^{1-beta}); beta = 0 is the iid edge (b = p)."""
    if p < 1:
        raise ValueError("need p >= 1")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("block exponent beta must lie in [0, 1]")
    return int(math.floor(p ** (1.0 - beta)))


def block_labels(p: int, beta: float) -> np.ndarray:
    """Block membership: b-1 blocks of size floor(p/b), the last absorbs the rest."""
    b = block_count(p, beta)
    size = p // b
    return np.minimum(np.arange(p) // size, b - 1)


@dataclass(frozen=True)
class BlockEquicorrelated(NoiseModel):
    """Within-block correlation 1, across-block independence (non-UDD array)."""

    beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("block exponent beta must lie in [0, 1]")

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        labels = block_labels(p, self.beta)
        values = rng.standard_normal(labels[-1] + 1)
        return values[labels]

    def covariance(self, p: int) -> np.ndarray:
        _check_dense(p)
        labels = block_labels(p, self.beta)
        return (labels[:, None] == labels[None, :]).astype(float)


@dataclass(frozen=True, eq=False)
class ExplicitCovariance(NoiseModel):
    """N(0, Sigma) with a caller-supplied unit-diagonal PSD matrix."""

    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("covariance must be a square matrix")
        _check_dense(s.shape[0])
        if not np.allclose(s, s.T, atol=1e-10):
            raise ValueError("covariance must be symmetric")
        if not np.allclose(np.diag(s), 1.0, atol=1e-8):
            raise ValueError("covariance must have unit diagonal")
        object.__setattr__(self, "sigma", s)

    def _factor(self) -> np.ndarray:
        cached = self.__dict__.get("_factor_cache")
        if cached is not None:
            return cached
        try:
            f = np.linalg.cholesky(self.sigma)
        except np.linalg.LinAlgError:
            vals, vecs = np.linalg.eigh(self.sigma)
            if vals.min() < -1e-8:
                raise ValueError("covariance is not positive semi-definite")
            f = vecs * np.sqrt(np.clip(vals, 0.0, None))
        self.__dict__["_factor_cache"] = f
        return f

    def sample(self, p: int, rng: np.random.Generator) -> np.ndarray:
        if p != self.sigma.shape[0]:
            raise ValueError("p must match the covariance dimension")
        return self._factor() @ rng.standard_normal(p)

    def covariance(self, p: int) -> np.ndarray:
        if p != self.sigma.shape[0]:
            raise ValueError("p must match the covariance dimension")
        return self.sigma
