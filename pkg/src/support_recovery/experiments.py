"""
Reproducible Monte Carlo harness for the exact-recovery phase diagrams.

A grid run sweeps sparsity exponents beta and signal strengths r at fixed
dimension p, replicating the signal-plus-noise trial ``reps`` times per cell
and recording the empirical exact-recovery probability together with FWER,
FDP, FNP, and Hamming summaries.

Reproducibility contract: every trial draws from its own counter-based
stream keyed by (seed, cell_index, rep_index) via Philox, so results are
bit-identical across runs and across parallelism levels.

Procedure and noise entries of a :class:`GridSpec` may be given as tagged
dicts (the JSON config format), in which case they are resolved per cell:

- procedure: {"kind": "fixed", "t": 3.0}, {"kind": "bonferroni"|"sidak"|
  "holm"|"hochberg", "alpha": 0.1}, {"kind": "oracle"} (true per-cell s),
  {"kind": "likelihood"} (true shift, known s), {"kind": "agnostic"}
  (family-matched slowly-vanishing-FWER threshold), {"kind":
  "block_adapted"} (threshold sqrt(2 (1-beta) log p) using the cell's beta);
- noise: {"kind": "iid"}, {"kind": "ar1", "rho": 0.9}, {"kind": "fgn",
  "hurst": 0.75}, {"kind": "block"} (block exponent = the cell's beta, as in
  the non-UDD construction) or {"kind": "block", "beta": 0.5}.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from . import procedures as proc_mod
from .boundaries import signal_magnitude, sparsity_count
from .noise import AR1, FGN, BlockEquicorrelated, ExplicitCovariance, IID, NoiseModel
from .procedures import Procedure, RecoveryMetrics, apply, metrics, oracle_top_s
from .tails import (
    AggAsymptotic,
    Gaussian,
    GeneralizedGaussian,
    HeavierThanAgg,
    Laplace,
    LighterThanAgg,
    Pareto,
    TailFamily,
)

__all__ = [
    "GridSpec",
    "GridCell",
    "GridResult",
    "ParetoSpec",
    "ParetoResult",
    "run_trial",
    "run_grid",
    "pareto_experiment",
    "bonferroni_alpha_schedule",
    "trial_stream",
    "family_from_spec",
    "family_to_spec",
    "noise_from_spec",
    "grid_spec_from_config",
    "grid_spec_to_config",
]

CSV_HEADER = ["beta", "r", "prob_exact", "stderr", "fwer", "mean_fdp", "mean_fnp", "mean_hamming", "reps"]


# ---------------------------------------------------------------------------
# Specs and results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """One phase-diagram experiment: a (beta, r) grid at fixed dimension."""

    p: int
    beta_grid: tuple
    r_grid: tuple
    reps: int
    family: TailFamily
    noise: object  # NoiseModel or tagged dict
    procedure: object  # Procedure or tagged dict
    seed: int
    signal_placement: str = "uniform_random"
    gg_constant: float = 1.0

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need p >= 2")
        if self.reps < 1:
            raise ValueError("need reps >= 1")
        beta_grid = tuple(float(b) for b in self.beta_grid)
        r_grid = tuple(float(r) for r in self.r_grid)
        if not beta_grid or not r_grid:
            raise ValueError("beta and r grids must be nonempty")
        if any(not 0.0 < b <= 1.0 for b in beta_grid):
            raise ValueError("beta grid values must lie in (0, 1]")
        if any(r <= 0.0 for r in r_grid):
            raise ValueError("r grid values must be positive")
        if self.signal_placement not in ("uniform_random", "fixed_prefix"):
            raise ValueError("signal_placement must be uniform_random or fixed_prefix")
        object.__setattr__(self, "beta_grid", beta_grid)
        object.__setattr__(self, "r_grid", r_grid)
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class GridCell:
    """Aggregated Monte Carlo metrics of one (beta, r) grid cell."""

    beta: float
    r: float
    prob_exact: float
    stderr: float
    fwer: float
    mean_fdp: float
    mean_fnp: float
    mean_hamming: float
    reps: int


@dataclass(frozen=True)
class GridResult:
    """All cells of a grid run, in beta-major order."""

    cells: tuple

    def cell(self, beta: float, r: float, tol: float = 1e-9) -> GridCell:
        for c in self.cells:
            if abs(c.beta - beta) <= tol and abs(c.r - r) <= tol:
                return c
        raise KeyError(f"no cell at beta={beta}, r={r}")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for c in self.cells:
                writer.writerow(
                    [f"{v:.6g}" for v in (c.beta, c.r, c.prob_exact, c.stderr, c.fwer,
                                          c.mean_fdp, c.mean_fnp, c.mean_hamming)]
                    + [str(c.reps)]
                )


@dataclass(frozen=True)
class ParetoSpec:
    """Heavy-tail experiment: fraction f of signals of size r * p^{1/alpha}."""

    p: int
    tail_index: float
    signal_fraction: float
    r: float
    reps: int
    seed: int
    limit_draws: int = 200_000

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need p >= 2")
        if not self.tail_index > 0.0:
            raise ValueError("tail_index must be positive")
        if not 0.0 < self.signal_fraction < 1.0:
            raise ValueError("signal_fraction must lie in (0, 1)")
        if not self.r > 0.0:
            raise ValueError("r must be positive")
        if self.reps < 1 or self.limit_draws < 1:
            raise ValueError("need reps >= 1 and limit_draws >= 1")
        if round(self.signal_fraction * self.p) < 1:
            raise ValueError("signal fraction too small: no signals")

    @property
    def s(self) -> int:
        return int(round(self.signal_fraction * self.p))

    @property
    def delta(self) -> float:
        return self.r * self.p ** (1.0 / self.tail_index)


@dataclass(frozen=True)
class ParetoResult:
    """Empirical oracle recovery probability next to its distributional limit."""

    empirical: float
    frechet_limit: float
    empirical_stderr: float
    limit_stderr: float


# ---------------------------------------------------------------------------
# Single trial
# ---------------------------------------------------------------------------


def trial_stream(seed: int, cell_index: int, rep_index: int) -> Generator:
    """Counter-based per-trial stream: identical regardless of scheduling."""
    return Generator(Philox(SeedSequence(seed, spawn_key=(cell_index, rep_index))))


def run_trial(
    p: int,
    beta: float,
    r: float,
    family: TailFamily,
    noise: NoiseModel,
    procedure: Procedure,
    rng: Generator,
    signal_placement: str = "uniform_random",
) -> RecoveryMetrics:
    """One signal-plus-noise draw: plant floor(p^{1-beta}) signals of size
    (nu r log p)^{1/nu}, add one noise vector, apply the procedure."""
    nu = family.agg_shape
    if nu is None:
        raise ValueError("signal strength r is parametrized only for AGG-shaped families")
    s = sparsity_count(p, beta)
    delta = signal_magnitude(nu, r, p)
    x = np.asarray(noise.sample(p, rng), dtype=float)
    if signal_placement == "uniform_random":
        support = np.sort(rng.choice(p, s, replace=False))
    elif signal_placement == "fixed_prefix":
        support = np.arange(s)
    else:
        raise ValueError("signal_placement must be uniform_random or fixed_prefix")
    x[support] += delta
    est = apply(procedure, x)
    return metrics(est, support)


# ---------------------------------------------------------------------------
# Per-cell resolution of tagged procedure / noise specs
# ---------------------------------------------------------------------------


def _shifted_logpdf(family: TailFamily, delta: float, x):
    return family.log_density(np.asarray(x, dtype=float) - delta)


def _resolve_procedure(spec, family: TailFamily, p: int, beta: float, r: float,
                       s: int, gg_constant: float) -> Procedure:
    if isinstance(spec, Procedure):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("procedure must be a Procedure or a tagged dict with a 'kind'")
    kind = spec["kind"]
    if kind == "fixed":
        return Procedure.fixed(float(spec["t"]))
    if kind in ("bonferroni", "sidak", "holm", "hochberg"):
        return Procedure(kind=kind, family=family, alpha=float(spec["alpha"]))
    if kind == "oracle":
        return Procedure.oracle(s)
    if kind == "likelihood":
        delta = signal_magnitude(family.agg_shape, r, p)
        return Procedure.likelihood(
            s,
            null_logpdf=family.log_density,
            alt_logpdf=partial(_shifted_logpdf, family, delta),
        )
    if kind == "agnostic":
        return Procedure.fixed(proc_mod.agnostic_threshold(family, p, gg_constant))
    if kind == "block_adapted":
        return Procedure.fixed(proc_mod.block_adapted_threshold(p, beta))
    raise ValueError(f"unknown procedure kind {kind!r}")


def _resolve_noise(spec, family: TailFamily, beta: float) -> NoiseModel:
    if isinstance(spec, NoiseModel):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("noise must be a NoiseModel or a tagged dict with a 'kind'")
    kind = spec["kind"]
    if kind == "iid":
        return IID(family)
    if kind == "ar1":
        return AR1(float(spec["rho"]))
    if kind == "fgn":
        return FGN(float(spec["hurst"]))
    if kind == "block":
        return BlockEquicorrelated(float(spec.get("beta", beta)))
    raise ValueError(f"unknown noise kind {kind!r}")


# ---------------------------------------------------------------------------
# Grid runner
# ---------------------------------------------------------------------------


def _run_cell(args) -> GridCell:
    spec, cell_index, beta, r = args
    p = spec.p
    s = sparsity_count(p, beta)
    noise = _resolve_noise(spec.noise, spec.family, beta)
    procedure = _resolve_procedure(spec.procedure, spec.family, p, beta, r, s, spec.gg_constant)
    n_exact = 0
    n_false = 0
    sum_fdp = 0.0
    sum_fnp = 0.0
    sum_ham = 0.0
    for rep in range(spec.reps):
        rng = trial_stream(spec.seed, cell_index, rep)
        m = run_trial(p, beta, r, spec.family, noise, procedure, rng, spec.signal_placement)
        n_exact += m.exact
        n_false += m.false_inclusion
        sum_fdp += m.fdp
        sum_fnp += m.fnp
        sum_ham += m.hamming
    reps = spec.reps
    phat = n_exact / reps
    return GridCell(
        beta=beta,
        r=r,
        prob_exact=phat,
        stderr=math.sqrt(phat * (1.0 - phat) / reps),
        fwer=n_false / reps,
        mean_fdp=sum_fdp / reps,
        mean_fnp=sum_fnp / reps,
        mean_hamming=sum_ham / reps,
        reps=reps,
    )


def run_grid(spec: GridSpec, parallelism: int = 1, progress=None) -> GridResult:
    """Run every (beta, r) cell; bit-identical output for any parallelism."""
    if parallelism < 1:
        raise ValueError("need parallelism >= 1")
    tasks = []
    idx = 0
    for beta in spec.beta_grid:
        for r in spec.r_grid:
            tasks.append((spec, idx, beta, r))
            idx += 1
    if parallelism == 1:
        cells = []
        for t in tasks:
            cells.append(_run_cell(t))
            if progress is not None:
                progress(len(cells), len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            cells = []
            for cell in pool.map(_run_cell, tasks):
                cells.append(cell)
                if progress is not None:
                    progress(len(cells), len(tasks))
    return GridResult(tuple(cells))


# ---------------------------------------------------------------------------
# Heavy-tail experiment
# ---------------------------------------------------------------------------


def pareto_experiment(spec: ParetoSpec) -> ParetoResult:
    """Oracle top-s recovery under two-sided power-law noise, next to the
    matching limit P[(1-f)^{1/a} Y1 + f^{1/a} Y2 < r] for iid Frechet Y."""
    family = Pareto(spec.tail_index)
    s = spec.s
    delta = spec.delta
    p = spec.p
    truth = None
    hits = 0
    for rep in range(spec.reps):
        rng = trial_stream(spec.seed, 1, rep)
        x = family.sample(p, rng)
        support = np.sort(rng.choice(p, s, replace=False))
        x[support] += delta
        est = oracle_top_s(x, s)
        hits += np.array_equal(est.selected, support)
    emp = hits / spec.reps

    rng = trial_stream(spec.seed, 0, 0)
    a = spec.tail_index
    y1 = (-np.log(rng.uniform(0.0, 1.0, spec.limit_draws))) ** (-1.0 / a)
    y2 = (-np.log(rng.uniform(0.0, 1.0, spec.limit_draws))) ** (-1.0 / a)
    f = spec.signal_fraction
    lim_hits = (1.0 - f) ** (1.0 / a) * y1 + f ** (1.0 / a) * y2 < spec.r
    lim = float(lim_hits.mean())

    return ParetoResult(
        empirical=emp,
        frechet_limit=lim,
        empirical_stderr=math.sqrt(emp * (1.0 - emp) / spec.reps),
        limit_stderr=math.sqrt(lim * (1.0 - lim) / spec.limit_draws),
    )


# ---------------------------------------------------------------------------
# FWER calibration schedule
# ---------------------------------------------------------------------------


def bonferroni_alpha_schedule(family: TailFamily, p: int, gg_constant: float = 1.0) -> float:
    """The FWER level alpha(p) = p * survival(t_p) implied by the agnostic
    threshold t_p; vanishes slowly in p, so alpha(p) * p^d diverges for d > 0."""
    t = proc_mod.agnostic_threshold(family, p, gg_constant)
    return float(p * family.survival(t))


# ---------------------------------------------------------------------------
# JSON config mapping (external interface)
# ---------------------------------------------------------------------------

_FAMILY_BUILDERS = {
    "gaussian": lambda d: Gaussian(),
    "laplace": lambda d: Laplace(),
    "gg": lambda d: GeneralizedGaussian(nu=float(d["nu"])),
    "agg": lambda d: AggAsymptotic(nu=float(d["nu"])),
    "heavier": lambda d: HeavierThanAgg(gamma=float(d["gamma"]), c=float(d.get("c", 1.0))),
    "lighter": lambda d: LighterThanAgg(nu=float(d["nu"])),
    "pareto": lambda d: Pareto(tail_index=float(d["tail_index"])),
}


def family_from_spec(d: dict) -> TailFamily:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("family spec must be a tagged dict with a 'kind'")
    kind = d["kind"]
    if kind not in _FAMILY_BUILDERS:
        raise ValueError(f"unknown family kind {kind!r}")
    try:
        return _FAMILY_BUILDERS[kind](d)
    except KeyError as missing:
        raise ValueError(f"family kind {kind!r} is missing field {missing}") from None


def family_to_spec(family: TailFamily) -> dict:
    if isinstance(family, Gaussian):
        return {"kind": "gaussian"}
    if isinstance(family, Laplace):
        return {"kind": "laplace"}
    if isinstance(family, GeneralizedGaussian):
        return {"kind": "gg", "nu": family.nu}
    if isinstance(family, AggAsymptotic):
        return {"kind": "agg", "nu": family.nu}
    if isinstance(family, HeavierThanAgg):
        return {"kind": "heavier", "gamma": family.gamma, "c": family.c}
    if isinstance(family, LighterThanAgg):
        return {"kind": "lighter", "nu": family.nu}
    if isinstance(family, Pareto):
        return {"kind": "pareto", "tail_index": family.tail_index}
    raise ValueError(f"cannot serialize family {family!r}")


def noise_from_spec(d: dict, family: TailFamily, beta: float | None = None) -> NoiseModel:
    """Materialize a tagged noise dict (block kind needs a beta)."""
    return _resolve_noise(d, family, beta if beta is not None else 1.0)


def noise_to_spec(noise) -> dict:
    if isinstance(noise, dict):
        return dict(noise)
    if isinstance(noise, IID):
        return {"kind": "iid"}
    if isinstance(noise, AR1):
        return {"kind": "ar1", "rho": noise.rho}
    if isinstance(noise, FGN):
        return {"kind": "fgn", "hurst": noise.hurst}
    if isinstance(noise, BlockEquicorrelated):
        return {"kind": "block", "beta": noise.beta}
    raise ValueError(f"cannot serialize noise model {noise!r}")


def grid_spec_from_config(cfg: dict) -> GridSpec:
    """Build a GridSpec from the JSON config object."""
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    required = ("p", "beta_grid", "r_grid", "reps", "family", "noise", "procedure", "seed")
    missing = [k for k in required if k not in cfg]
    if missing:
        raise ValueError(f"config is missing keys: {', '.join(missing)}")
    return GridSpec(
        p=int(cfg["p"]),
        beta_grid=tuple(float(b) for b in cfg["beta_grid"]),
        r_grid=tuple(float(r) for r in cfg["r_grid"]),
        reps=int(cfg["reps"]),
        family=family_from_spec(cfg["family"]),
        noise=dict(cfg["noise"]),
        procedure=dict(cfg["procedure"]),
        seed=int(cfg["seed"]),
        signal_placement=cfg.get("signal_placement", "uniform_random"),
        gg_constant=float(cfg.get("gg_constant", 1.0)),
    )


def grid_spec_to_config(spec: GridSpec) -> dict:
    proc = spec.procedure if isinstance(spec.procedure, dict) else {"kind": spec.procedure.kind}
    return {
        "p": spec.p,
        "beta_grid": list(spec.beta_grid),
        "r_grid": list(spec.r_grid),
        "reps": spec.reps,
        "family": family_to_spec(spec.family),
        "noise": noise_to_spec(spec.noise),
        "procedure": dict(proc),
        "seed": spec.seed,
        "signal_placement": spec.signal_placement,
        "gg_constant": spec.gg_constant,
    }


def with_overrides(spec: GridSpec, p=None, reps=None, seed=None) -> GridSpec:
    """Copy a spec with CLI-style overrides applied."""
    changes = {}
    if p is not None:
        changes["p"] = int(p)
    if reps is not None:
        changes["reps"] = int(reps)
    if seed is not None:
        changes["seed"] = int(seed)
    return replace(spec, **changes) if changes else spec
