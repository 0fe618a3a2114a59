"""Weight-grid search over the racing scenarios."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..race_sim import RaceConfig, run_race
from .classifiers import WEIGHT_SPACE, ParamSpace


def grid_points(intervals, space: ParamSpace = WEIGHT_SPACE) -> list[tuple[float, ...]]:
    """Midpoints of `intervals` equal subdivisions per dimension, row-major.

    `intervals` is an int (same count per dimension) or one count per
    dimension. One interval per dimension yields the single range midpoint.
    """
    if isinstance(intervals, int):
        intervals = (intervals,) * space.dim
    if len(intervals) != space.dim or any(k < 1 for k in intervals):
        raise ValueError("intervals must be positive, one per dimension")
    axes = []
    for (lo, hi), k in zip(space.bounds, intervals):
        width = (hi - lo) / k
        axes.append([lo + (i + 0.5) * width for i in range(k)])
    mesh = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=1)
    return [tuple(float(v) for v in row) for row in flat]


def _run_one(config: RaceConfig):
    return run_race(config)


def grid_search(scenario: str, method: str, grid_spec, jobs: int = 1, space: ParamSpace = WEIGHT_SPACE, **config_overrides):
    """One race per grid point; results ordered by grid index regardless of jobs."""
    configs = [
        RaceConfig(scenario=scenario, method=method, theta1=theta, **config_overrides)
        for theta in grid_points(grid_spec, space)
    ]
    if jobs <= 1:
        return [run_race(cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, configs))
