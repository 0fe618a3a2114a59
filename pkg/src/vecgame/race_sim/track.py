"""Circular annulus race track geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def wrap_angle(a):
    """Wrap an angle (or array of angles) to (-pi, pi]."""
    wrapped = -((-np.asarray(a) + math.pi) % (2.0 * math.pi) - math.pi)
    return float(wrapped) if np.ndim(a) == 0 else wrapped


@dataclass(frozen=True)
class Track:
    """Annulus between r_inner and r_outer, raced counterclockwise by default."""

    center: tuple[float, float] = (0.0, 0.0)
    r_inner: float = 25.0
    r_outer: float = 40.0
    ccw: bool = True

    def __post_init__(self):
        if not 0.0 < self.r_inner < self.r_outer:
            raise ValueError("track radii must satisfy 0 < r_inner < r_outer")

    @property
    def r_center(self) -> float:
        return 0.5 * (self.r_inner + self.r_outer)

    def angle_of(self, xy):
        """Track angle of point(s); xy has shape (..., 2). CCW-positive."""
        p = np.asarray(xy, dtype=float)
        ang = np.arctan2(p[..., 1] - self.center[1], p[..., 0] - self.center[0])
        if not self.ccw:
            ang = -ang
        return float(ang) if ang.ndim == 0 else ang

    def radius_of(self, xy):
        p = np.asarray(xy, dtype=float)
        r = np.hypot(p[..., 0] - self.center[0], p[..., 1] - self.center[1])
        return float(r) if r.ndim == 0 else r

    def boundary_distance(self, xy):
        """Distance off the track; zero anywhere inside the annulus."""
        rho = self.radius_of(xy)
        off = np.maximum(self.r_inner - rho, 0.0) + np.maximum(rho - self.r_outer, 0.0)
        return float(off) if np.ndim(off) == 0 else off

    def centerline_distance(self, xy):
        """Radial distance to the centerline circle."""
        d = np.abs(self.radius_of(xy) - self.r_center)
        return float(d) if np.ndim(d) == 0 else d

    def contains(self, xy):
        rho = self.radius_of(xy)
        inside = (rho >= self.r_inner) & (rho <= self.r_outer)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def neutral_steer(self, state, lf: float = 1.0, lr: float = 1.0) -> float:
        """Steering command holding the current radius (road-following arc)."""
        rho = max(self.radius_of((state.x, state.y)), 1e-6)
        ratio = min(lr / rho, 1.0)
        slip = math.asin(ratio) if self.ccw else -math.asin(ratio)
        return math.atan(math.tan(slip) * (lf + lr) / lr)

    def spawn_state(self, angle: float, radius: float, speed: float):
        """(x, y, heading) tangent to the direction of travel at a track angle."""
        a = angle if self.ccw else -angle
        x = self.center[0] + radius * math.cos(a)
        y = self.center[1] + radius * math.sin(a)
        heading = wrap_angle(a + (math.pi / 2.0 if self.ccw else -math.pi / 2.0))
        return x, y, heading, speed
