"""Figure rendering for dimension tables and check reports.

Figures are written straight to files; the Agg backend keeps this usable in
headless runs alongside the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def dims_figure(table, path: str, title: str = "graded dimensions") -> str:
    """Heat map of a (degree, weight) dimension table."""
    cells = table.nonzero()
    if not cells:
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.text(0.5, 0.5, "empty table", ha="center", va="center")
        ax.set_axis_off()
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        return path
    degs = sorted({d for d, _ in cells})
    wts = sorted({w for _, w in cells})
    grid = np.zeros((len(wts), len(degs)))
    for (d, w), n in cells.items():
        grid[wts.index(w), degs.index(d)] = n
    fig, ax = plt.subplots(figsize=(max(4, len(degs) * 0.35), max(3, len(wts) * 0.35)))
    im = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(degs)), [str(d) for d in degs], rotation=90, fontsize=7)
    ax.set_yticks(range(len(wts)), [str(w) for w in wts], fontsize=7)
    ax.set_xlabel("degree")
    ax.set_ylabel("weight")
    ax.set_title(title)
    for (d, w), n in cells.items():
        ax.text(degs.index(d), wts.index(w), str(n), ha="center", va="center",
                color="white", fontsize=6)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def bar_report_figure(rows, path: str, title: str = "bar homology vs dual words") -> str:
    """Pass/fail grid for the per-cell comparison rows
    (level, degree, weight, bar_dim, word_count, equal)."""
    if not rows:
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.text(0.5, 0.5, "no cells", ha="center", va="center")
        ax.set_axis_off()
    else:
        levels = sorted({r[0] for r in rows})
        degs = sorted({r[1] for r in rows})
        grid = np.full((len(levels), len(degs)), np.nan)
        for s, d, w, a, b, eq in rows:
            grid[levels.index(s), degs.index(d)] = 1.0 if eq else 0.0
        fig, ax = plt.subplots(figsize=(max(4, len(degs) * 0.3), max(2.5, len(levels) * 0.6)))
        ax.imshow(grid, origin="lower", aspect="auto", cmap="RdYlGn", vmin=0, vmax=1)
        ax.set_xticks(range(len(degs)), [str(d) for d in degs], rotation=90, fontsize=7)
        ax.set_yticks(range(len(levels)), [str(s) for s in levels])
        ax.set_xlabel("degree")
        ax.set_ylabel("homological level")
        ax.set_title(title)
        for s, d, w, a, b, eq in rows:
            ax.text(degs.index(d), levels.index(s), f"{a}/{b}", ha="center",
                    va="center", fontsize=6)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
