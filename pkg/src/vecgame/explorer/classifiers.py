"""Parameter spaces and success/failure classifiers.

A classifier is any callable mapping a raw parameter vector to True
(success) or False (failure). Exploration happens in the unit cube; a
ParamSpace maps between raw coordinates and normalized ones so the
boundary resolution stays dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..race_sim import RaceConfig, run_race

METRICS = ("passes", "bounds", "collisions")


@dataclass(frozen=True)
class ParamSpace:
    """Axis-aligned box of valid parameter vectors."""

    bounds: tuple[tuple[float, float], ...]

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def to_unit(self, theta):
        theta = np.asarray(theta, dtype=float)
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        return (theta - lo) / (hi - lo)

    def from_unit(self, u):
        u = np.asarray(u, dtype=float)
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        return lo + u * (hi - lo)

    def contains(self, theta) -> bool:
        u = self.to_unit(theta)
        return bool(np.all(u >= 0.0) and np.all(u <= 1.0))


# The attacker weight space: progress weight must stay strictly positive.
WEIGHT_SPACE = ParamSpace(bounds=((0.001, 1.0), (0.0, 1.0), (0.0, 1.0)))

UNIT_CUBE_3D = ParamSpace(bounds=((0.0, 1.0),) * 3)


@dataclass(frozen=True)
class HalfSpaceClassifier:
    """Failure where coordinate `axis` is below `threshold`."""

    axis: int = 0
    threshold: float = 0.5

    def __call__(self, x) -> bool:
        return bool(np.asarray(x, dtype=float)[self.axis] >= self.threshold)


@dataclass(frozen=True)
class PlaneClassifier:
    """Failure on the positive side of the hyperplane normal . x = offset."""

    normal: tuple[float, ...]
    offset: float

    def __call__(self, x) -> bool:
        n = np.asarray(self.normal, dtype=float)
        n = n / np.linalg.norm(n)
        return bool(float(np.dot(n, np.asarray(x, dtype=float))) <= self.offset)


@dataclass(frozen=True)
class SphereClassifier:
    """Failure inside the sphere."""

    center: tuple[float, ...]
    radius: float

    def __call__(self, x) -> bool:
        d = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(self.center, dtype=float))
        return bool(d >= self.radius)


def race_success(record, metric: str) -> bool:
    if metric == "passes":
        return record.passed
    if metric == "bounds":
        return not record.out_of_bounds
    if metric == "collisions":
        return not record.collided
    raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")


def race_predicate(scenario: str, method: str, metric: str, **config_overrides):
    """Classifier over attacker weights: run one race, mark success/failure."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")

    def predicate(theta) -> bool:
        cfg = RaceConfig(
            scenario=scenario,
            method=method,
            theta1=tuple(float(t) for t in theta),
            **config_overrides,
        )
        return race_success(run_race(cfg), metric)

    return predicate
