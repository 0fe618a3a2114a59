"""Boundary discovery and adherence in normalized parameter space.

The walk operates on a success/failure predicate over the unit cube:
global random search finds one point of each class, bisection tightens the
straddling pair to the working resolution, then the boundary is traced by
stepping tangentially from known boundary points, re-straddling along the
local normal, and bisecting again. Normals start as the straddle direction
and are refined from the local shape of the accumulated point cloud. All
predicate evaluations draw from one shared sample budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .classifiers import ParamSpace

TERMINATIONS = ("point_cap", "saturation", "sample_cap", "no_failure_found")


class Budget:
    """Shared countdown of classifier evaluations."""

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.used

    def spend(self) -> None:
        if self.remaining <= 0:
            raise RuntimeError("sample budget exhausted")
        self.used += 1


@dataclass(frozen=True)
class BoundarySample:
    """A straddling pair tightened to the resolution, in unit-cube coords."""

    inside: np.ndarray  # success side
    outside: np.ndarray  # failure side
    midpoint: np.ndarray
    normal: np.ndarray  # unit vector pointing toward failure


@dataclass(frozen=True)
class ExploreConfig:
    resolution: float = 0.07
    max_boundary_points: int = 250
    max_samples: int = 500
    n_tangent_dirs: int = 8
    normal_probe_steps: int = 3
    volume_samples: int = 100_000
    seed: int = 0
    min_spacing_factor: float = 0.5  # new points must clear resolution * factor


@dataclass
class ExplorationReport:
    boundary: list[BoundarySample]
    samples_used: int
    volume_estimate: float
    termination: str
    global_samples: list[tuple[np.ndarray, bool]] = field(default_factory=list)


def _counted(predicate, space: ParamSpace | None, budget: Budget):
    def classify(u) -> bool:
        budget.spend()
        raw = space.from_unit(u) if space is not None else np.asarray(u, dtype=float)
        return bool(predicate(raw))

    return classify


def find_boundary_pair(classify, budget: Budget, rng, dim: int, record=None):
    """Uniform global search for one success and one failure point."""
    success = failure = None
    while budget.remaining > 0 and (success is None or failure is None):
        u = rng.uniform(0.0, 1.0, size=dim)
        outcome = classify(u)
        if record is not None:
            record.append((u, outcome))
        if outcome and success is None:
            success = u
        elif not outcome and failure is None:
            failure = u
    if success is None or failure is None:
        return None
    return success, failure


def bisect_to_boundary(pair, classify, resolution: float, budget: Budget):
    """Shrink a straddling pair along its segment until within resolution."""
    inside, outside = (np.asarray(p, dtype=float) for p in pair)
    while np.linalg.norm(inside - outside) > resolution:
        if budget.remaining <= 0:
            return None
        mid = 0.5 * (inside + outside)
        if classify(mid):
            inside = mid
        else:
            outside = mid
    gap = outside - inside
    norm = np.linalg.norm(gap)
    normal = gap / norm if norm > 0 else np.zeros_like(gap)
    return BoundarySample(inside=inside, outside=outside, midpoint=0.5 * (inside + outside), normal=normal)


def _tangent_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to the normal."""
    d = normal.shape[0]
    n = normal / np.linalg.norm(normal)
    # Rows 1..d-1 of V^T from the SVD of the 1 x d matrix [n] span the complement.
    _, _, vt = np.linalg.svd(n[None, :])
    return vt[1:]


def _local_normal(point: np.ndarray, samples: list[BoundarySample], fallback: np.ndarray, radius: float):
    """PCA normal of nearby midpoints, oriented toward the failure side."""
    mids = np.array([s.midpoint for s in samples])
    close = mids[np.linalg.norm(mids - point, axis=1) <= radius]
    if close.shape[0] < 3:
        return fallback
    centered = close - close.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=True)
    normal = vt[-1]
    if np.linalg.norm(normal) == 0:
        return fallback
    normal = normal / np.linalg.norm(normal)
    if float(np.dot(normal, fallback)) < 0:
        normal = -normal
    return normal


def _too_close(point: np.ndarray, samples: list[BoundarySample], spacing: float) -> bool:
    return any(np.linalg.norm(point - s.midpoint) < spacing for s in samples)


def _probe_for_pair(cand, normal, classify, budget: Budget, cfg: ExploreConfig):
    """Re-straddle the boundary around a tangential candidate point."""
    if budget.remaining <= 0:
        return None
    cand = np.clip(cand, 0.0, 1.0)
    cand_class = classify(cand)
    direction = normal if cand_class else -normal  # march toward the opposite class
    last = cand
    for step in range(1, cfg.normal_probe_steps + 1):
        probe = np.clip(cand + step * cfg.resolution * direction, 0.0, 1.0)
        if np.allclose(probe, last):
            return None  # pinned against the box
        if budget.remaining <= 0:
            return None
        if classify(probe) != cand_class:
            pair = (last, probe) if cand_class else (probe, last)
            return bisect_to_boundary(pair, classify, cfg.resolution, budget)
        last = probe
    return None


def adhere_boundary(seed: BoundarySample, classify, budget: Budget, cfg: ExploreConfig, rng):
    """Walk the boundary from a seed sample; returns (samples, termination)."""
    samples = [seed]
    frontier = deque([seed])
    spacing = cfg.resolution * cfg.min_spacing_factor
    termination = "saturation"
    while frontier:
        if len(samples) >= cfg.max_boundary_points:
            termination = "point_cap"
            break
        if budget.remaining <= 0:
            termination = "sample_cap"
            break
        node = frontier.popleft()
        normal = _local_normal(node.midpoint, samples, node.normal, 4.0 * cfg.resolution)
        tangents = _tangent_basis(normal)
        base = rng.uniform(0.0, 2.0 * np.pi)
        for k in range(cfg.n_tangent_dirs):
            if len(samples) >= cfg.max_boundary_points or budget.remaining <= 0:
                break
            ang = base + 2.0 * np.pi * k / cfg.n_tangent_dirs
            direction = np.cos(ang) * tangents[0] + np.sin(ang) * tangents[min(1, len(tangents) - 1)]
            cand = node.midpoint + cfg.resolution * direction
            if _too_close(np.clip(cand, 0.0, 1.0), samples, spacing):
                continue
            new = _probe_for_pair(cand, normal, classify, budget, cfg)
            if new is not None and not _too_close(new.midpoint, samples, spacing):
                samples.append(new)
                frontier.append(new)
    else:
        termination = "saturation"
    if len(samples) >= cfg.max_boundary_points:
        termination = "point_cap"
    elif budget.remaining <= 0 and termination == "saturation":
        termination = "sample_cap"
    return samples, termination


def refine_normals(samples: list[BoundarySample], radius: float) -> list[BoundarySample]:
    """Re-estimate every normal from the final midpoint cloud."""
    refined = []
    for s in samples:
        fallback = s.normal if np.linalg.norm(s.normal) > 0 else np.ones_like(s.midpoint)
        refined.append(replace(s, normal=_local_normal(s.midpoint, samples, fallback, radius)))
    return refined


def explore(predicate, space: ParamSpace | None, cfg: ExploreConfig) -> ExplorationReport:
    """Full pipeline: global search, bisection, adherence, volume estimate."""
    from .volume import boundary_volume  # local import to avoid a cycle

    dim = space.dim if space is not None else 3
    budget = Budget(cfg.max_samples)
    rng = np.random.default_rng(cfg.seed)
    classify = _counted(predicate, space, budget)

    global_samples: list[tuple[np.ndarray, bool]] = []
    pair = find_boundary_pair(classify, budget, rng, dim, record=global_samples)
    if pair is None:
        found_failure = any(not ok for _, ok in global_samples)
        volume = 0.0 if (found_failure and not any(ok for _, ok in global_samples)) else 1.0
        termination = "sample_cap" if found_failure else "no_failure_found"
        return ExplorationReport([], budget.used, volume, termination, global_samples)

    seed_sample = bisect_to_boundary(pair, classify, cfg.resolution, budget)
    if seed_sample is None:
        return ExplorationReport([], budget.used, 1.0, "sample_cap", global_samples)

    samples, termination = adhere_boundary(seed_sample, classify, budget, cfg, rng)
    samples = refine_normals(samples, 4.0 * cfg.resolution)
    volume = boundary_volume(samples, cfg.volume_samples, cfg.seed + 1)
    return ExplorationReport(samples, budget.used, volume, termination, global_samples)
