"""
Phase-diagram heatmaps from grid CSVs.

Input is the simulator's grid CSV (columns beta, r, prob_exact, ...) plus an
optional boundary CSV (columns beta, g, h, f, nonudd).  Each grid file
becomes one panel: cells shaded by the empirical probability of exact
support recovery on a grayscale-compatible sequential map (light = 0,
dark = 1), with the strong boundary drawn solid, the weak boundary dashed,
and the detection boundary dash-dotted, all clipped to the panel's r range.

Rendering is pure file-to-file and deterministic: identical inputs give
identical image dimensions and axes.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "PanelBox", "RenderInfo", "load_grid", "load_boundary",
           "render_heatmap", "main"]

DPI = 110


@dataclass(frozen=True)
class FigureSpec:
    """One figure: panels from grid CSVs, shared boundary overlay, output path."""

    grid_csvs: tuple
    out: str
    boundary_csv: str | None = None
    title: str = ""
    cmap: str = "Greys"


@dataclass(frozen=True)
class PanelBox:
    """Pixel bounding box of one panel's data area (origin at top-left)."""

    left: int
    right: int
    top: int
    bottom: int


@dataclass(frozen=True)
class RenderInfo:
    """What was written: size, per-panel pixel boxes, overlay status."""

    out: str
    width_px: int
    height_px: int
    panels: tuple
    overlays_drawn: bool


def load_grid(path):
    """Read a grid CSV into (betas, rs, prob[r_index, beta_index]).

    The (beta, r) cells must tile a full rectangle; a missing or duplicated
    cell raises with the offending coordinates.
    """
    cells = {}
    with open(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "beta" not in reader.fieldnames:
            raise ValueError(f"{path}: not a grid CSV (no beta column)")
        for row in reader:
            key = (float(row["beta"]), float(row["r"]))
            if key in cells:
                raise ValueError(f"{path}: duplicate cell beta={key[0]:g}, r={key[1]:g}")
            cells[key] = float(row["prob_exact"])
    if not cells:
        raise ValueError(f"{path}: empty grid")
    betas = np.array(sorted({b for b, _ in cells}))
    rs = np.array(sorted({r for _, r in cells}))
    prob = np.empty((rs.size, betas.size))
    for i, r in enumerate(rs):
        for j, b in enumerate(betas):
            if (b, r) not in cells:
                raise ValueError(f"{path}: ragged grid, missing cell beta={b:g}, r={r:g}")
            prob[i, j] = cells[(b, r)]
    return betas, rs, prob


def load_boundary(path):
    """Read a boundary CSV into arrays; the detection column may have gaps."""
    rows = {"beta": [], "g": [], "h": [], "f": [], "nonudd": []}
    with open(path) as fh:
        for row in csv.DictReader(fh):
            rows["beta"].append(float(row["beta"]))
            rows["g"].append(float(row["g"]))
            rows["h"].append(float(row["h"]))
            rows["f"].append(float(row["f"]) if row.get("f") else np.nan)
            rows["nonudd"].append(float(row["nonudd"]) if row.get("nonudd") else np.nan)
    return {k: np.array(v) for k, v in rows.items()}


def _edges(values: np.ndarray) -> np.ndarray:
    if values.size == 1:
        half = 0.5 * (abs(values[0]) if values[0] else 1.0)
        return np.array([values[0] - half, values[0] + half])
    mids = 0.5 * (values[1:] + values[:-1])
    first = values[0] - (mids[0] - values[0])
    last = values[-1] + (values[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def render_heatmap(spec: FigureSpec) -> RenderInfo:
    """Render every grid panel plus boundary overlays and write the image."""
    grids = [load_grid(p) for p in spec.grid_csvs]

    boundary = None
    if spec.boundary_csv is not None:
        try:
            boundary = load_boundary(spec.boundary_csv)
        except OSError:
            warnings.warn(f"boundary CSV {spec.boundary_csv!r} not readable; "
                          "rendering without overlays")

    n = len(grids)
    fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 3.6), squeeze=False, dpi=DPI)
    for ax, (betas, rs, prob) in zip(axes[0], grids):
        mesh = ax.pcolormesh(_edges(betas), _edges(rs), prob,
                             cmap=spec.cmap, vmin=0.0, vmax=1.0, shading="flat")
        if boundary is not None:
            ax.plot(boundary["beta"], boundary["g"], "k-", lw=1.6, label="exact")
            ax.plot(boundary["beta"], boundary["h"], "k--", lw=1.2, label="approximate")
            mask = ~np.isnan(boundary["f"])
            if mask.any():
                ax.plot(boundary["beta"][mask], boundary["f"][mask], "k-.",
                        lw=1.2, label="detection")
        ax.set_xlim(_edges(betas)[0], _edges(betas)[-1])
        ax.set_ylim(_edges(rs)[0], _edges(rs)[-1])  # clips overlays to the r range
        ax.set_xlabel("sparsity exponent beta")
        ax.set_ylabel("signal strength r")
    fig.colorbar(mesh, ax=axes[0].tolist(), label="P[exact recovery]", fraction=0.046)
    if spec.title:
        fig.suptitle(spec.title)
    if boundary is not None:
        axes[0][-1].legend(loc="upper right", fontsize=7)
    fig.savefig(spec.out, dpi=DPI)

    width, height = fig.canvas.get_width_height()
    panels = []
    for ax in axes[0]:
        bbox = ax.get_position()
        panels.append(PanelBox(
            left=int(bbox.x0 * width),
            right=int(bbox.x1 * width),
            top=int((1.0 - bbox.y1) * height),
            bottom=int((1.0 - bbox.y0) * height),
        ))
    plt.close(fig)
    return RenderInfo(out=spec.out, width_px=width, height_px=height,
                      panels=tuple(panels), overlays_drawn=boundary is not None)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render phase-diagram heatmaps from grid CSVs.",
    )
    parser.add_argument("--grid", action="append", required=True,
                        help="grid CSV (repeat for multiple panels)")
    parser.add_argument("--boundary", default=None, help="boundary CSV to overlay")
    parser.add_argument("--title", default="")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    spec = FigureSpec(grid_csvs=tuple(args.grid), out=args.out,
                      boundary_csv=args.boundary, title=args.title)
    try:
        info = render_heatmap(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {info.out} ({info.width_px}x{info.height_px} px, "
          f"{len(info.panels)} panel(s), overlays={'yes' if info.overlays_drawn else 'no'})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
