"""Phase-diagram rendering for exact-support-recovery grid CSVs."""

__version__ = "0.1.0"

from .render import FigureSpec, RenderInfo, load_boundary, load_grid, render_heatmap
