"""Point costs and trajectory cost tensors for the racing game.

Two cost structures are supported. The linear structure charges the signed
angular gap to the opponent, the Euclidean distance off the track (zero
inside it), and a thresholded linear proximity penalty. The radial-basis
structure keeps the progress term but maps centerline and opponent
distances through smooth exponentials so every region of the track retains
cost gradient, which is what lets the adjustment optimization find usable
candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .track import Track, wrap_angle
from .vehicle import Trajectory

STRUCTURES = ("linear", "rbf")


@dataclass(frozen=True)
class CostParams:
    """Shape parameters for the point-cost formulas."""

    structure: str = "rbf"
    tau: float = 8.0  # proximity threshold (m), linear structure
    q: float = 8.0  # proximity value at zero distance, linear structure
    s_b: float = 100.0  # centerline slope tuning (m^2), rbf structure
    s_c: float = 14.0  # proximity slope tuning (m^2), rbf structure

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise ValueError(f"structure must be one of {STRUCTURES}")
        if self.tau <= 0 or self.s_b <= 0 or self.s_c <= 0:
            raise ValueError("tau, s_b and s_c must be positive")


def _progress(alpha, beta):
    return wrap_angle(np.asarray(beta) - np.asarray(alpha))


def _bounds_cost(p, track: Track, params: CostParams):
    if params.structure == "linear":
        return track.boundary_distance(p)
    d = track.centerline_distance(p)
    return 1.0 - np.exp(-2.0 * np.square(d) / params.s_b)


def _proximity_cost(dist, params: CostParams):
    dist = np.asarray(dist, dtype=float)
    if params.structure == "linear":
        val = (params.q - dist) * (dist < params.tau)
    else:
        val = np.exp(-2.0 * np.square(dist) / params.s_c)
    return val


def point_costs(p, player_angle, opponent_angle, opponent_pos, track: Track, params: CostParams):
    """Per-point (progress, bounds, proximity) costs for one player."""
    p = np.asarray(p, dtype=float)
    o = np.asarray(opponent_pos, dtype=float)
    c1 = _progress(player_angle, opponent_angle)
    c2 = _bounds_cost(p, track, params)
    c3 = _proximity_cost(np.linalg.norm(p - o), params)
    return float(c1), float(c2), float(c3)


def _positions(trajs: tuple[Trajectory, ...]) -> np.ndarray:
    return np.array([[(pt.x, pt.y) for pt in tr.points] for tr in trajs])


def build_cost_tensors(traj1, traj2, track: Track, params: CostParams, dt: float):
    """Per-player (3, n, m) cost tensors over simultaneous trajectory pairs.

    Entry (h, g, s) accumulates that player's h-th point cost along its own
    candidate, against the opponent's candidate sampled at the same
    timestamps, as a dt-weighted sum.
    """
    P1 = _positions(traj1)  # (n, T, 2)
    P2 = _positions(traj2)  # (m, T, 2)
    if P1.shape[1] != P2.shape[1]:
        raise ValueError("trajectory sets must share the sampling horizon")
    A1 = track.angle_of(P1)  # (n, T)
    A2 = track.angle_of(P2)  # (m, T)

    gap = wrap_angle(A2[None, :, :] - A1[:, None, :])  # (n, m, T), opponent minus self for P1
    dist = np.linalg.norm(P1[:, None, :, :] - P2[None, :, :, :], axis=-1)  # (n, m, T)

    bounds1 = _bounds_cost(P1, track, params)  # (n, T)
    bounds2 = _bounds_cost(P2, track, params)  # (m, T)
    prox = _proximity_cost(dist, params)  # (n, m, T)

    n, m = P1.shape[0], P2.shape[0]
    prog1 = gap.sum(axis=2)
    prog2 = wrap_angle(A1[:, None, :] - A2[None, :, :]).sum(axis=2)
    C1 = np.stack([
        prog1,
        np.broadcast_to(bounds1.sum(axis=1)[:, None], (n, m)),
        prox.sum(axis=2),
    ]) * dt
    C2 = np.stack([
        prog2,
        np.broadcast_to(bounds2.sum(axis=1)[None, :], (n, m)),
        prox.sum(axis=2),
    ]) * dt
    return C1, C2
