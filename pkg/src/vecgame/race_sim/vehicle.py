"""Kinematic bicycle model and the 9-action static trajectory set."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .track import wrap_angle


@dataclass(frozen=True)
class VehicleState:
    """Planar kinematic state: position (m), speed (m/s), yaw and slip (rad)."""

    x: float
    y: float
    v: float
    heading: float
    slip: float = 0.0


@dataclass(frozen=True)
class ActionSpec:
    """One of the 9 static (acceleration, steering) combinations.

    Indices 1-3 decelerate, 4-6 hold speed, 7-9 accelerate; within each
    group the steering order is left, straight, right.
    """

    index: int
    accel: float
    steer: float


def action_space(accel: float, steer: float) -> tuple[ActionSpec, ...]:
    """The 9 actions in canonical index order. Left steering is positive."""
    actions = []
    idx = 1
    for a in (-accel, 0.0, accel):
        for s in (steer, 0.0, -steer):
            actions.append(ActionSpec(index=idx, accel=a, steer=s))
            idx += 1
    return tuple(actions)


def step_bicycle(
    state: VehicleState,
    action: ActionSpec,
    dt: float,
    v_max: float,
    lf: float = 1.0,
    lr: float = 1.0,
    drag: float = 0.0,
) -> VehicleState:
    """Advance one explicit-Euler step of the kinematic bicycle model.

    ``drag`` is a constant rolling-resistance deceleration; it keeps the
    coast and throttle action groups distinct once the speed cap binds.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    slip = math.atan(lr * math.tan(action.steer) / (lf + lr))
    course = state.heading + slip
    x = state.x + state.v * math.cos(course) * dt
    y = state.y + state.v * math.sin(course) * dt
    heading = wrap_angle(state.heading + state.v * math.sin(slip) / lr * dt)
    v = min(max(state.v + (action.accel - drag) * dt, 0.0), v_max)
    return VehicleState(x=x, y=y, v=v, heading=heading, slip=slip)


@dataclass(frozen=True)
class Trajectory:
    """Sampled candidate motion: the current state plus horizon/dt steps."""

    points: tuple[VehicleState, ...]
    action: ActionSpec


def rollout(
    state: VehicleState,
    action: ActionSpec,
    dt: float,
    horizon: float,
    v_max: float,
    lf: float = 1.0,
    lr: float = 1.0,
    drag: float = 0.0,
    neutral_fn=None,
) -> Trajectory:
    """Repeated bicycle stepping under one action.

    When ``neutral_fn`` is given, the action's steering is an offset on top
    of the per-step neutral command it returns (road-following steering on
    a curved track); otherwise steering is absolute.
    """
    steps = max(1, round(horizon / dt))
    points = [replace(state)]
    current = state
    for _ in range(steps):
        cmd = action
        if neutral_fn is not None:
            cmd = replace(action, steer=action.steer + neutral_fn(current))
        current = step_bicycle(current, cmd, dt, v_max, lf=lf, lr=lr, drag=drag)
        points.append(current)
    return Trajectory(points=tuple(points), action=action)


def generate_trajectories(
    state: VehicleState,
    accel: float,
    steer: float,
    dt: float,
    horizon: float,
    v_max: float,
    lf: float = 1.0,
    lr: float = 1.0,
    drag: float = 0.0,
    neutral_fn=None,
) -> tuple[Trajectory, ...]:
    """One deterministic trajectory per action, all sharing the start state."""
    return tuple(
        rollout(state, action, dt, horizon, v_max, lf=lf, lr=lr, drag=drag, neutral_fn=neutral_fn)
        for action in action_space(accel, steer)
    )


def footprint_corners(state: VehicleState, length: float, width: float):
    """Corners of the oriented vehicle rectangle centered on the state."""
    ch, sh = math.cos(state.heading), math.sin(state.heading)
    hl, hw = 0.5 * length, 0.5 * width
    return [
        (state.x + dx * ch - dy * sh, state.y + dx * sh + dy * ch)
        for dx, dy in ((hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw))
    ]


def rectangles_overlap(corners_a, corners_b) -> bool:
    """Separating-axis overlap test for two convex quadrilaterals."""
    for corners in (corners_a, corners_b):
        for i in range(4):
            x1, y1 = corners[i]
            x2, y2 = corners[(i + 1) % 4]
            ax, ay = y2 - y1, x1 - x2  # edge normal
            proj_a = [ax * x + ay * y for x, y in corners_a]
            proj_b = [ax * x + ay * y for x, y in corners_b]
            if max(proj_a) < min(proj_b) or max(proj_b) < min(proj_a):
                return False  # separating axis found
    return True


def collides(state_a: VehicleState, state_b: VehicleState, length: float, width: float) -> bool:
    """Oriented-rectangle overlap between two vehicle footprints."""
    return rectangles_overlap(
        footprint_corners(state_a, length, width),
        footprint_corners(state_b, length, width),
    )
