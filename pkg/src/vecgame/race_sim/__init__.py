from .costs import CostParams, build_cost_tensors, point_costs
from .race import SCENARIOS, PhysicsParams, RaceConfig, RaceRecord, RoundLog, run_race
from .track import Track
from .vehicle import (
    ActionSpec,
    Trajectory,
    VehicleState,
    action_space,
    generate_trajectories,
    step_bicycle,
)

__all__ = [
    "ActionSpec",
    "CostParams",
    "PhysicsParams",
    "RaceConfig",
    "RaceRecord",
    "RoundLog",
    "SCENARIOS",
    "Track",
    "Trajectory",
    "VehicleState",
    "action_space",
    "build_cost_tensors",
    "generate_trajectories",
    "point_costs",
    "run_race",
    "step_bicycle",
]
