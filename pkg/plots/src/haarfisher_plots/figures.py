"""Figure renderers.

Each renderer is a pure function of its input files: all statistics
(means, CCDFs, fitted constants, regression lines) are read from the
files and never recomputed, and the matplotlib style is pinned so the
same inputs give the same image bytes.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import SchemaError, column, fits_by_dimension, read_csv, read_json

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _finish(fig, out_path) -> None:
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def render_sweep(sweep_csv, out_path) -> None:
    """Line plot of the sqrt(N)-scaled mean relative error against N."""
    _, columns, data = read_csv(sweep_csv, "sweep")
    n = column(columns, data, "N")
    scaled = column(columns, data, "scaled")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(n, scaled, marker="o", color="tab:blue")
    ax.set_xlabel("dimension N")
    ax.set_ylabel(r"$\sqrt{N}\times$ mean relative error")
    ax.set_ylim(bottom=0.0)
    ax.set_title("Scaled relative Frobenius error across dimensions")
    ax.grid(alpha=0.3)
    _finish(fig, out_path)


def _panel_grid(count: int) -> tuple[int, int]:
    cols = 2 if count > 1 else 1
    return math.ceil(count / cols), cols


def render_hist(hist_csv, out_path) -> None:
    """Per-dimension histograms of the relative error, from stored bins."""
    _, columns, data = read_csv(hist_csv, "hist")
    ns = column(columns, data, "N").astype(int)
    dims = sorted(set(ns.tolist()))
    rows, cols = _panel_grid(len(dims))
    fig, axes = plt.subplots(rows, cols, figsize=(5.0 * cols, 3.2 * rows), squeeze=False)
    for ax, n in zip(axes.ravel(), dims):
        sel = ns == n
        left = column(columns, data, "bin_left")[sel]
        right = column(columns, data, "bin_right")[sel]
        count = column(columns, data, "count")[sel]
        ax.bar(left, count, width=right - left, align="edge",
               color="tab:blue", edgecolor="white")
        ax.set_title(f"N = {n}")
        ax.set_xlabel("relative error")
        ax.set_ylabel("frequency")
    for ax in axes.ravel()[len(dims):]:
        ax.set_visible(False)
    fig.suptitle("Distribution of the relative QFIM estimation error")
    fig.tight_layout()
    _finish(fig, out_path)


def _ccdf_for(columns, data, n: int) -> tuple[np.ndarray, np.ndarray]:
    ns = column(columns, data, "N").astype(int)
    sel = ns == n
    if not sel.any():
        raise SchemaError(f"no CCDF rows for dimension {n}")
    return column(columns, data, "t")[sel], column(columns, data, "ccdf")[sel]


def render_ccdf_grid(ccdf_csv, tailfit_json, out_path) -> None:
    """Per-dimension empirical CCDFs with the stored exp(-c N t^2)
    curves overlaid (both the regression and the adjusted constant)."""
    _, columns, data = read_csv(ccdf_csv, "ccdf")
    fits = fits_by_dimension(read_json(tailfit_json, "tailfit"))
    dims = sorted(set(column(columns, data, "N").astype(int).tolist()))
    missing = [n for n in dims if n not in fits]
    if missing:
        raise SchemaError(f"tailfit document lacks fits for dimensions {missing}")
    rows, cols = _panel_grid(len(dims))
    fig, axes = plt.subplots(rows, cols, figsize=(5.0 * cols, 3.4 * rows), squeeze=False)
    for ax, n in zip(axes.ravel(), dims):
        t, p = _ccdf_for(columns, data, n)
        pos = p > 0
        ax.semilogy(t[pos], p[pos], drawstyle="steps-post", color="tab:blue",
                    label="empirical")
        grid = np.linspace(0.0, t.max(), 200)
        for key, style, label in (("c_regression", "--", "regression"),
                                  ("c_adjusted", ":", "adjusted")):
            c = fits[n][key]
            ax.semilogy(grid, np.exp(-c * n * grid ** 2), style, color="tab:red",
                        label=f"exp(-cNt^2), {label} c={c:.3g}")
        ax.set_ylim(bottom=max(p[pos].min() * 0.5, 1e-7))
        ax.set_title(f"N = {n}")
        ax.set_xlabel("t")
        ax.set_ylabel("P(error > t)")
        ax.legend(fontsize=7)
    for ax in axes.ravel()[len(dims):]:
        ax.set_visible(False)
    fig.suptitle("Empirical tails against stored exponential curves")
    fig.tight_layout()
    _finish(fig, out_path)


def render_tail_analysis(ccdf_csv, tailfit_json, out_path, dim: int | None = None) -> None:
    """Four-panel tail analysis for one dimension: the CCDF, the log-CCDF
    against t^2 with the stored regression line, the adjusted theoretical
    curve, and the empirical/bound ratio."""
    _, columns, data = read_csv(ccdf_csv, "ccdf")
    fits = fits_by_dimension(read_json(tailfit_json, "tailfit"))
    dims = sorted(set(column(columns, data, "N").astype(int).tolist()))
    if dim is None:
        if len(dims) != 1:
            raise SchemaError(f"CCDF file holds dimensions {dims}; pick one with --dim")
        dim = dims[0]
    if dim not in fits:
        raise SchemaError(f"tailfit document lacks a fit for dimension {dim}")
    fit = fits[dim]
    t, p = _ccdf_for(columns, data, dim)
    pos = p > 0

    fig, axes = plt.subplots(2, 2, figsize=(10.0, 7.0))
    ax = axes[0, 0]
    ax.plot(t, p, drawstyle="steps-post", color="tab:blue")
    ax.set_xlabel("t")
    ax.set_ylabel("P(error > t)")
    ax.set_title("Empirical tail probability")

    ax = axes[0, 1]
    ax.plot(t[pos] ** 2, np.log(p[pos]), ".", ms=3, color="tab:blue", label="log CCDF")
    slope = -fit["c_regression"] * dim
    grid_sq = np.linspace(0.0, (t.max()) ** 2, 100)
    ax.plot(grid_sq, slope * grid_sq + fit["regression_intercept"], "--", color="tab:red",
            label=f"stored regression, c={fit['c_regression']:.3g}")
    ax.set_xlabel(r"$t^2$")
    ax.set_ylabel("log P(error > t)")
    ax.set_title("Log tail probability vs t^2")
    ax.legend(fontsize=8)

    ax = axes[1, 0]
    curve = np.exp(-fit["c_adjusted"] * dim * t ** 2)
    ax.plot(t, p, drawstyle="steps-post", color="tab:blue", label="empirical")
    ax.plot(t, curve, "--", color="tab:red",
            label=f"exp(-cNt^2), c={fit['c_adjusted']:.3g}")
    ax.set_xlabel("t")
    ax.set_ylabel("P(error > t)")
    ax.set_title("Best dominating curve")
    ax.legend(fontsize=8)

    ax = axes[1, 1]
    ratio = np.where(curve > 0, p / np.where(curve > 0, curve, 1.0), np.nan)
    ax.plot(t, ratio, color="tab:blue")
    ax.axhline(1.0, color="tab:red", ls="--", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("empirical / bound")
    ax.set_title("Ratio to the dominating curve")

    fig.suptitle(f"Tail analysis, N = {dim}")
    fig.tight_layout()
    _finish(fig, out_path)
