"""Figure rendering for haarfisher experiment outputs.

Consumes the CSV/JSON files written by the `haarfisher` CLI (sweep.csv,
hist.csv, ccdf.csv, tailfit.json) and renders PNG figures; statistics
are read from the files, never recomputed.
"""

from .figures import render_ccdf_grid, render_hist, render_sweep, render_tail_analysis
from .readers import SchemaError

__version__ = "0.1.0"

__all__ = [
    "SchemaError",
    "render_ccdf_grid",
    "render_hist",
    "render_sweep",
    "render_tail_analysis",
]
