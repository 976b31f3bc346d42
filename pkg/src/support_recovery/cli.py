"""
Command-line front end.

Subcommands
-----------
boundary    sample the phase-transition boundary curves to CSV
simulate    run a (beta, r) Monte Carlo grid from a JSON config, write the
            grid CSV plus a re-run manifest
quantile    exact and asymptotic upper quantiles of a marginal family
check-udd   covariance exceedance counts (and optionally the greedy packing)
            for a dependence model or an explicit covariance CSV
stability   concentration-of-maxima summary M_p / u_p for a dependence model
pareto      heavy-tail oracle recovery probability next to its limit

Exit codes: 0 success, 2 config/usage error, 3 runtime error.  Every
subcommand is deterministic given --seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .boundaries import detection_boundary, non_udd_boundary, strong_boundary, weak_boundary
from .diagnostics import gamma_packing, stability_ratio, udd_profile
from .experiments import (
    ParetoSpec,
    family_from_spec,
    grid_spec_from_config,
    grid_spec_to_config,
    noise_from_spec,
    pareto_experiment,
    run_grid,
    with_overrides,
)
from .tails import asymptotic_quantile

__all__ = ["main", "build_parser"]


def _family_from_args(args) -> object:
    spec = {"kind": args.family}
    if args.family in ("gg", "agg", "lighter"):
        if args.nu is None:
            raise ValueError(f"family {args.family!r} needs --nu")
        spec["nu"] = args.nu
    if args.family == "heavier":
        if args.gamma is None:
            raise ValueError("family 'heavier' needs --gamma")
        spec["gamma"] = args.gamma
        spec["c"] = args.c
    if args.family == "pareto":
        if args.tail_index is None:
            raise ValueError("family 'pareto' needs --tail-index")
        spec["tail_index"] = args.tail_index
    return family_from_spec(spec)


def _add_family_args(sub) -> None:
    sub.add_argument("--family", default="gaussian",
                     choices=["gaussian", "laplace", "gg", "agg", "heavier", "lighter", "pareto"])
    sub.add_argument("--nu", type=float, default=None, help="shape for gg/agg/lighter")
    sub.add_argument("--gamma", type=float, default=None, help="shape for heavier")
    sub.add_argument("--c", type=float, default=1.0, help="scale for heavier")
    sub.add_argument("--tail-index", type=float, default=None, help="index for pareto")


def _parse_noise(text: str) -> dict:
    name, _, arg = text.partition(":")
    if name == "iid":
        return {"kind": "iid"}
    if name == "ar1":
        return {"kind": "ar1", "rho": float(arg)}
    if name == "fgn":
        return {"kind": "fgn", "hurst": float(arg)}
    if name == "block":
        return {"kind": "block", "beta": float(arg)}
    raise ValueError(f"unknown noise model {text!r} (use iid, ar1:RHO, fgn:H, block:BETA)")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_boundary(args) -> int:
    if args.grid_points < 2:
        raise ValueError("need at least 2 grid points")
    if not 0.0 < args.beta_min < args.beta_max <= 1.0:
        raise ValueError("need 0 < beta-min < beta-max <= 1")
    betas = np.linspace(args.beta_min, args.beta_max, args.grid_points)
    with open(args.out, "w") as fh:
        fh.write("beta,g,h,f,nonudd\n")
        for b in betas:
            b = float(b)
            g = strong_boundary(b, args.nu)
            h = weak_boundary(b)
            f = f"{detection_boundary(b):.6g}" if (args.nu == 2.0 and b > 0.5) else ""
            fh.write(f"{b:.6g},{g:.6g},{h:.6g},{f},{non_udd_boundary(b):.6g}\n")
    print(f"wrote {args.grid_points} boundary rows to {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    with open(args.config) as fh:
        obj = json.load(fh)
    cfg = obj["config"] if isinstance(obj, dict) and "config" in obj else obj
    spec = grid_spec_from_config(cfg)
    spec = with_overrides(spec, p=args.p, reps=args.reps, seed=args.seed)

    def progress(done: int, total: int) -> None:
        print(f"cell {done}/{total}", file=sys.stderr)

    workers = args.parallelism if args.parallelism else (os.cpu_count() or 1)
    t0 = time.perf_counter()
    result = run_grid(spec, parallelism=workers, progress=progress)
    wall = time.perf_counter() - t0
    result.write_csv(args.out)

    echo = grid_spec_to_config(spec)
    canonical = json.dumps(echo, sort_keys=True, separators=(",", ":")).encode()
    manifest = {
        "config": echo,
        "seed": spec.seed,
        "cells": len(result.cells),
        "wall_time_s": round(wall, 3),
        "library_version": __version__,
        "config_sha256": hashlib.sha256(canonical).hexdigest(),
    }
    manifest_path = str(args.out) + ".manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(result.cells)} cells to {args.out} ({wall:.2f}s); manifest {manifest_path}")
    return 0


def _cmd_quantile(args) -> int:
    family = _family_from_args(args)
    if (args.q is None) == (args.upper_p is None):
        raise ValueError("give exactly one of --q or --upper-p")
    if args.q is not None:
        print(f"quantile({args.q:g}) = {float(family.quantile(args.q)):.10g}")
        return 0
    p = args.upper_p
    u = family.upper_quantile(p)
    print(f"u_p = F^-1(1 - 1/{p:g}) = {u:.10g}")
    if family.agg_shape is not None and p >= 2:
        ua = asymptotic_quantile(family.agg_shape, p)
        print(f"asymptotic (nu log p)^(1/nu) = {ua:.10g}   (ratio {u / ua:.6g})")
    return 0


def _load_sigma(args) -> np.ndarray:
    if args.matrix is not None:
        return np.loadtxt(args.matrix, delimiter=",", ndmin=2)
    if args.model is None:
        raise ValueError("give --matrix CSV or --model SPEC")
    noise = noise_from_spec(_parse_noise(args.model), family_from_spec({"kind": "gaussian"}))
    return noise.covariance(args.p)


def _cmd_check_udd(args) -> int:
    sigma = _load_sigma(args)
    deltas = [float(d) for d in args.delta.split(",")]
    profile = udd_profile(sigma, deltas)
    print(f"dimension p = {sigma.shape[0]}")
    for d, n in zip(profile.delta_grid, profile.counts):
        line = f"delta={d:.4g}  N_p={n}  (N = N_p + 1 = {n + 1})"
        if args.packing:
            pack = gamma_packing(sigma, d)
            line += f"  packing_size={pack.size}  bound>={sigma.shape[0] // (n + 1)}"
        print(line)
    return 0


def _cmd_stability(args) -> int:
    family = _family_from_args(args)
    noise = noise_from_spec(_parse_noise(args.model), family)
    rng = np.random.default_rng(args.seed)
    subset = args.subset_size if args.subset_size is not None else args.p
    summary = stability_ratio(noise, family, args.p, subset, args.reps, rng)
    print(f"M_S / u_|S| over {args.reps} replications (p={args.p}, |S|={subset}):")
    print(f"  mean={summary.mean:.4f}  median={summary.median:.4f}  std={summary.std:.4f}")
    print(f"  q05={summary.q05:.4f}  q25={summary.q25:.4f}  q75={summary.q75:.4f}  q95={summary.q95:.4f}")
    return 0


def _cmd_pareto(args) -> int:
    spec = ParetoSpec(
        p=args.p,
        tail_index=args.tail_index,
        signal_fraction=args.fraction,
        r=args.r,
        reps=args.reps,
        seed=args.seed,
        limit_draws=args.limit_draws,
    )
    res = pareto_experiment(spec)
    print(f"empirical oracle recovery = {res.empirical:.4f} (se {res.empirical_stderr:.4f})")
    print(f"frechet limit             = {res.frechet_limit:.4f} (se {res.limit_stderr:.4f})")
    print(f"gap = {abs(res.empirical - res.frechet_limit):.4f}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="support-recovery",
        description="Phase diagrams, thresholding procedures, and dependence "
                    "diagnostics for exact support recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("boundary", help="emit boundary curves as CSV")
    b.add_argument("--nu", type=float, default=2.0)
    b.add_argument("--grid-points", type=int, default=99)
    b.add_argument("--beta-min", type=float, default=0.01)
    b.add_argument("--beta-max", type=float, default=0.99)
    b.add_argument("--out", required=True)
    b.set_defaults(func=_cmd_boundary)

    s = sub.add_parser("simulate", help="run a Monte Carlo grid from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--reps", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--parallelism", type=int, default=None,
                   help="worker processes (default: all cores)")
    s.set_defaults(func=_cmd_simulate)

    q = sub.add_parser("quantile", help="exact and asymptotic quantiles")
    _add_family_args(q)
    q.add_argument("--q", type=float, default=None)
    q.add_argument("--upper-p", type=float, default=None)
    q.set_defaults(func=_cmd_quantile)

    u = sub.add_parser("check-udd", help="covariance exceedance counts")
    u.add_argument("--model", default=None, help="iid | ar1:RHO | fgn:H | block:BETA")
    u.add_argument("--matrix", default=None, help="CSV file with an explicit covariance")
    u.add_argument("--p", type=int, default=100)
    u.add_argument("--delta", default="0.2,0.4,0.6,0.8")
    u.add_argument("--packing", action="store_true")
    u.set_defaults(func=_cmd_check_udd)

    st = sub.add_parser("stability", help="concentration of maxima summary")
    st.add_argument("--model", required=True)
    _add_family_args(st)
    st.add_argument("--p", type=int, required=True)
    st.add_argument("--subset-size", type=int, default=None)
    st.add_argument("--reps", type=int, default=200)
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(func=_cmd_stability)

    pa = sub.add_parser("pareto", help="heavy-tail oracle recovery vs its limit")
    pa.add_argument("--p", type=int, default=10_000)
    pa.add_argument("--tail-index", type=float, required=True)
    pa.add_argument("--fraction", type=float, required=True)
    pa.add_argument("--r", type=float, required=True)
    pa.add_argument("--reps", type=int, default=2000)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--limit-draws", type=int, default=200_000)
    pa.set_defaults(func=_cmd_pareto)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
