"""Two-vehicle racing rounds driven by the bimatrix game.

The defender always plays the security column of its scalarized costs. The
attacker plays either the security row of its own scalarized costs
("scalar") or the adjusted-cost selection loop ("vector"). One round =
both players committing to a full planning-horizon trajectory
simultaneously, then advancing to its endpoint.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..cost_adjust import DEFAULT_EPS, select_policy
from ..errors import ConfigError
from ..game_core import scalarize, security_policy_col, security_policy_row
from .costs import STRUCTURES, CostParams, build_cost_tensors
from .track import Track, wrap_angle
from .vehicle import VehicleState, collides, footprint_corners, generate_trajectories

METHODS = ("scalar", "vector")

# Spawn geometry per scenario: angular gap to the defender (rad) and the
# attacker's spawn radius (m). The defender spawns on the centerline ahead.
SCENARIOS = {
    "close_tail": {"gap_angle": 0.28, "attacker_radius": None},  # None -> centerline
    "far_tail": {"gap_angle": 0.55, "attacker_radius": None},
    "inside_edge": {"gap_angle": 0.35, "attacker_radius": 27.5},
    "outside_edge": {"gap_angle": 0.35, "attacker_radius": 37.5},
}


@dataclass(frozen=True)
class PhysicsParams:
    """Vehicle and planning constants, all overridable from config files."""

    dt: float = 0.1
    horizon: float = 1.0  # planning lookahead per round
    commit: float = 1.0  # executed portion of the chosen trajectory per round
    accel: float = 2.0
    steer: float = 0.1
    v_max_attacker: float = 9.0
    v_max_defender: float = 6.0
    drag: float = 0.4
    road_frame: bool = True  # steering options are offsets on arc-following neutral
    lf: float = 1.0
    lr: float = 1.0
    veh_length: float = 4.0
    veh_width: float = 2.0
    v0_attacker: float = 5.0
    v0_defender: float = 5.0


@dataclass(frozen=True)
class RaceConfig:
    scenario: str = "close_tail"
    method: str = "scalar"
    theta1: tuple[float, float, float] = (1.0, 1.0, 1.0)
    theta2: tuple[float, float, float] = (1.0, 1.0, 1.0)
    structure: str = "rbf"
    rounds: int = 30
    seed: int = 0
    eps: float = DEFAULT_EPS
    tie_tol: float = 1e-6  # flat-objective gate for the adjustment path
    tie_frac: tuple = (0.0, 0.0, 0.0)  # per-objective near-worst band, fraction of range
    physics: PhysicsParams = field(default_factory=PhysicsParams)
    costs: CostParams | None = None  # structure is injected when None
    track: Track = field(default_factory=Track)
    spawn: dict = field(default_factory=dict)  # per-scenario geometry overrides

    def __post_init__(self):
        problems = []
        if self.scenario not in SCENARIOS:
            problems.append(f"scenario: {self.scenario!r} not in {sorted(SCENARIOS)}")
        if self.method not in METHODS:
            problems.append(f"method: {self.method!r} not in {list(METHODS)}")
        if self.structure not in STRUCTURES:
            problems.append(f"structure: {self.structure!r} not in {list(STRUCTURES)}")
        for name in ("theta1", "theta2"):
            th = getattr(self, name)
            if len(th) != 3:
                problems.append(f"{name}: expected 3 weights, got {len(th)}")
            elif any(w < 0 for w in th) or not any(w > 0 for w in th):
                problems.append(f"{name}: weights must be nonnegative, not all zero")
        if not 1 <= self.rounds <= 30:
            problems.append(f"rounds: must be in 1..30, got {self.rounds}")
        if problems:
            raise ConfigError("; ".join(problems))
        if self.costs is None:
            object.__setattr__(self, "costs", CostParams(structure=self.structure))
        elif self.costs.structure != self.structure:
            raise ConfigError("costs.structure must match config structure")

    @classmethod
    def from_dict(cls, raw: dict) -> "RaceConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        data = dict(raw)
        if "physics" in data and isinstance(data["physics"], dict):
            data["physics"] = PhysicsParams(**data["physics"])
        if "track" in data and isinstance(data["track"], dict):
            tr = dict(data["track"])
            if "center" in tr:
                tr["center"] = tuple(tr["center"])
            data["track"] = Track(**tr)
        if "costs" in data and isinstance(data["costs"], dict):
            data["costs"] = CostParams(structure=data.get("structure", "rbf"), **data["costs"])
        for name in ("theta1", "theta2"):
            if name in data:
                data[name] = tuple(float(x) for x in data[name])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["track"]["center"] = list(self.track.center)
        return out


@dataclass(frozen=True)
class RoundLog:
    """Everything needed to replay one round's decision."""

    round: int
    state1: VehicleState  # pre-decision
    state2: VehicleState
    C1: np.ndarray  # (3, 9, 9)
    C2: np.ndarray
    row: int
    col: int
    method: str  # scalar | adjusted | scalar_fallback
    candidates_tried: int
    attacker_costs: tuple[float, float, float]
    defender_costs: tuple[float, float, float]


@dataclass
class RaceRecord:
    config: RaceConfig
    rounds: list[RoundLog]
    passed: bool
    out_of_bounds: bool
    collided: bool
    min_distance: float
    lead_fraction: float
    attacker_cost_totals: tuple[float, float, float]
    defender_cost_totals: tuple[float, float, float]

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "state_convention": "pre_decision",
            "rounds": [
                {
                    "round": rl.round,
                    "state1": asdict(rl.state1),
                    "state2": asdict(rl.state2),
                    "C1": rl.C1.tolist(),
                    "C2": rl.C2.tolist(),
                    "row": rl.row,
                    "col": rl.col,
                    "method": rl.method,
                    "candidates_tried": rl.candidates_tried,
                    "attacker_costs": list(rl.attacker_costs),
                    "defender_costs": list(rl.defender_costs),
                }
                for rl in self.rounds
            ],
            "passed": self.passed,
            "out_of_bounds": self.out_of_bounds,
            "collided": self.collided,
            "min_distance": self.min_distance,
            "lead_fraction": self.lead_fraction,
            "attacker_cost_totals": list(self.attacker_cost_totals),
            "defender_cost_totals": list(self.defender_cost_totals),
        }


def spawn_states(config: RaceConfig) -> tuple[VehicleState, VehicleState, float, float]:
    """Initial states plus starting unwrapped track angles (attacker, defender)."""
    geometry = dict(SCENARIOS[config.scenario])
    geometry.update(config.spawn)
    track = config.track
    gap = float(geometry["gap_angle"])
    attacker_radius = geometry["attacker_radius"]
    if attacker_radius is None:
        attacker_radius = track.r_center
    defender_radius = float(geometry.get("defender_radius", track.r_center))
    a0, d0 = 0.0, gap
    x, y, heading, v = track.spawn_state(a0, float(attacker_radius), config.physics.v0_attacker)
    attacker = VehicleState(x=x, y=y, v=v, heading=heading)
    x, y, heading, v = track.spawn_state(d0, defender_radius, config.physics.v0_defender)
    defender = VehicleState(x=x, y=y, v=v, heading=heading)
    return attacker, defender, a0, d0


def _angle_gain(track: Track, points) -> float:
    """Cumulative signed track-angle progress along executed points."""
    angles = [track.angle_of((pt.x, pt.y)) for pt in points]
    return float(sum(wrap_angle(b - a) for a, b in zip(angles, angles[1:])))


def run_race(config: RaceConfig, solve_log=None) -> RaceRecord:
    """Play the configured number of rounds; pure function of the config."""
    phys = config.physics
    track = config.track
    state1, state2, ua1, ua2 = spawn_states(config)

    rounds: list[RoundLog] = []
    passed = False
    out_of_bounds = False
    collided = False
    min_distance = math.inf
    lead_rounds = 0
    att_totals = np.zeros(3)
    def_totals = np.zeros(3)

    for rnd in range(1, config.rounds + 1):
        neutral = (lambda s: track.neutral_steer(s, phys.lf, phys.lr)) if phys.road_frame else None
        traj1 = generate_trajectories(
            state1, phys.accel, phys.steer, phys.dt, phys.horizon,
            phys.v_max_attacker, lf=phys.lf, lr=phys.lr, drag=phys.drag, neutral_fn=neutral,
        )
        traj2 = generate_trajectories(
            state2, phys.accel, phys.steer, phys.dt, phys.horizon,
            phys.v_max_defender, lf=phys.lf, lr=phys.lr, drag=phys.drag, neutral_fn=neutral,
        )
        C1, C2 = build_cost_tensors(traj1, traj2, track, config.costs, phys.dt)

        D2 = scalarize(C2, config.theta2)
        sigma = security_policy_col(D2)[0]
        if config.method == "vector":
            sel = select_policy(C1, D2, config.theta1, eps=config.eps, tie_tol=config.tie_tol, tie_frac=config.tie_frac, log=solve_log)
            row, method_used, tried = sel.row_policy, sel.method, sel.candidates_tried
        else:
            row = security_policy_row(scalarize(C1, config.theta1))[0]
            method_used, tried = "scalar", 0

        chosen1, chosen2 = traj1[row - 1], traj2[sigma - 1]
        commit_steps = max(1, min(round(phys.commit / phys.dt), len(chosen1.points) - 1))
        att_costs = tuple(float(C1[h, row - 1, sigma - 1]) for h in range(3))
        def_costs = tuple(float(C2[h, row - 1, sigma - 1]) for h in range(3))
        rounds.append(
            RoundLog(
                round=rnd, state1=state1, state2=state2, C1=C1, C2=C2,
                row=row, col=sigma, method=method_used, candidates_tried=tried,
                attacker_costs=att_costs, defender_costs=def_costs,
            )
        )
        att_totals += att_costs
        def_totals += def_costs

        executed1 = chosen1.points[: commit_steps + 1]
        executed2 = chosen2.points[: commit_steps + 1]
        for p1, p2 in zip(executed1, executed2):
            min_distance = min(min_distance, math.hypot(p1.x - p2.x, p1.y - p2.y))
            if not collided and collides(p1, p2, phys.veh_length, phys.veh_width):
                collided = True
            if not out_of_bounds:
                # attacker performance metric: flagged when the attacker leaves the annulus
                rho = math.hypot(p1.x - track.center[0], p1.y - track.center[1])
                if rho > track.r_outer or rho < track.r_inner:
                    out_of_bounds = True

        ua1 += _angle_gain(track, executed1)
        ua2 += _angle_gain(track, executed2)
        state1, state2 = executed1[-1], executed2[-1]
        if ua1 > ua2:
            passed = True
            lead_rounds += 1

    return RaceRecord(
        config=config,
        rounds=rounds,
        passed=passed,
        out_of_bounds=out_of_bounds,
        collided=collided,
        min_distance=float(min_distance),
        lead_fraction=lead_rounds / config.rounds,
        attacker_cost_totals=tuple(att_totals),
        defender_cost_totals=tuple(def_totals),
    )
