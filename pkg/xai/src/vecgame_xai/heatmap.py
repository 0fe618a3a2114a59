"""Cost-matrix importance heatmaps: (row, col) grids aggregated over rounds."""

from __future__ import annotations

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .columns import parse_column
from .importance import ImportanceReport

GRID_SHAPE = (9, 9)
LOG_FLOOR = 1e-12


def heatmap_grid(report: ImportanceReport, cost_type: str, player: int) -> np.ndarray:
    """Aggregate importances by (n, m) across rounds; attacker rows, defender cols."""
    grid = np.zeros(GRID_SHAPE)
    matched = 0
    for name, value in report.importances.items():
        info = parse_column(name)
        if info.kind != "cost" or info.cost_name != cost_type or info.player != player:
            continue
        if info.row <= GRID_SHAPE[0] and info.col <= GRID_SHAPE[1]:
            grid[info.row - 1, info.col - 1] += value
            matched += 1
    if matched == 0:
        warnings.warn(f"no {cost_type}{player} cost features in the report; emitting the floor grid")
    return grid


def log_scaled(grid: np.ndarray, floor: float = LOG_FLOOR) -> np.ndarray:
    """Log10 grid with a uniform floor so all-zero input stays well-defined."""
    return np.log10(np.maximum(grid, floor))


def heatmap_export(report: ImportanceReport, cost_type: str, player: int, out_dir, floor: float = LOG_FLOOR):
    """Write the 9x9 log-scaled grid as CSV and a rendered PNG; returns the grid."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = heatmap_grid(report, cost_type, player)
    scaled = log_scaled(grid, floor)
    stem = f"heatmap_{cost_type.lower()}{player}_{report.target}"
    np.savetxt(out_dir / f"{stem}.csv", scaled, delimiter=",", fmt="%.6f")

    fig, ax = plt.subplots(figsize=(5, 4.2))
    im = ax.imshow(scaled, origin="upper", cmap="viridis",
                   extent=(0.5, 9.5, 9.5, 0.5), aspect="equal")
    ax.set_xlabel("defender action (m)")
    ax.set_ylabel("attacker action (n)")
    ax.set_xticks(range(1, 10))
    ax.set_yticks(range(1, 10))
    ax.set_title(f"{cost_type}{player} importance (log10), target {report.target}")
    fig.colorbar(im, ax=ax, label="log10 importance")
    fig.tight_layout()
    fig.savefig(out_dir / f"{stem}.png", dpi=120)
    plt.close(fig)
    return grid
