"""Vehicle dynamics, cost construction, and race-loop behavior."""

import json
import math

import numpy as np
import pytest

from vecgame.errors import ConfigError
from vecgame.game_core import moderate_set, scalarize, security_policy_col
from vecgame.race_sim import (
    CostParams,
    PhysicsParams,
    RaceConfig,
    Track,
    VehicleState,
    action_space,
    build_cost_tensors,
    generate_trajectories,
    point_costs,
    run_race,
    step_bicycle,
)
from vecgame.race_sim.features import feature_columns, parse_column, record_row
from vecgame.race_sim.race import spawn_states
from vecgame.race_sim.track import wrap_angle
from vecgame.race_sim.vehicle import ActionSpec, collides


# ---- bicycle model -----------------------------------------------------------

def test_straight_step_is_exact():
    s = VehicleState(x=1.0, y=2.0, v=4.0, heading=0.5)
    a = ActionSpec(index=5, accel=0.0, steer=0.0)
    nxt = step_bicycle(s, a, dt=0.25, v_max=10.0)
    assert nxt.slip == 0.0
    assert nxt.heading == pytest.approx(0.5)
    assert math.hypot(nxt.x - s.x, nxt.y - s.y) == pytest.approx(4.0 * 0.25)
    assert nxt.v == pytest.approx(4.0)


def test_speed_clamps_at_cap_and_floor():
    s = VehicleState(x=0, y=0, v=6.0, heading=0.0)
    up = step_bicycle(s, ActionSpec(9, 2.0, 0.0), dt=1.0, v_max=6.0)
    assert up.v == 6.0
    down = step_bicycle(VehicleState(0, 0, 0.1, 0.0), ActionSpec(1, -2.0, 0.0), dt=1.0, v_max=6.0)
    assert down.v == 0.0


def test_constant_turn_traces_closed_circle():
    # radius from bicycle geometry: R = lr / sin(slip)
    lf = lr = 1.0
    steer, v, dt = 0.3, 5.0, 1e-4
    slip = math.atan(lr * math.tan(steer) / (lf + lr))
    R = lr / math.sin(slip)
    period = 2 * math.pi * R / v
    s = VehicleState(x=0.0, y=0.0, v=v, heading=0.0)
    a = ActionSpec(index=6, accel=0.0, steer=steer)
    steps = round(period / dt)
    cur = s
    for _ in range(steps):
        cur = step_bicycle(cur, a, dt, v_max=10.0, lf=lf, lr=lr)
    assert math.hypot(cur.x - s.x, cur.y - s.y) < 1e-3 * R


def test_action_space_index_encoding():
    acts = action_space(2.0, 0.1)
    assert [a.index for a in acts] == list(range(1, 10))
    assert all(a.accel == -2.0 for a in acts[:3])
    assert all(a.accel == 0.0 for a in acts[3:6])
    assert all(a.accel == 2.0 for a in acts[6:])
    for group in (acts[:3], acts[3:6], acts[6:]):
        assert [a.steer for a in group] == [0.1, 0.0, -0.1]


def test_trajectories_share_start_and_count():
    s = VehicleState(x=3.0, y=-2.0, v=5.0, heading=1.0)
    trajs = generate_trajectories(s, 2.0, 0.1, dt=0.1, horizon=1.0, v_max=9.0)
    assert len(trajs) == 9
    for tr in trajs:
        assert tr.points[0] == s
        assert len(tr.points) == 11


def test_coast_straight_endpoint_distance():
    s = VehicleState(x=0.0, y=0.0, v=5.0, heading=0.3)
    trajs = generate_trajectories(s, 2.0, 0.1, dt=0.1, horizon=1.0, v_max=9.0)
    five = trajs[4]
    end = five.points[-1]
    assert math.hypot(end.x, end.y) == pytest.approx(5.0 * 1.0, rel=1e-9)


def test_endpoint_lateral_offsets_ordered_within_groups():
    s = VehicleState(x=0.0, y=0.0, v=6.0, heading=0.0)
    trajs = generate_trajectories(s, 2.0, 0.15, dt=0.1, horizon=1.0, v_max=9.0)
    for base in (0, 3, 6):
        left, straight, right = (trajs[base + k].points[-1] for k in range(3))
        # cross-track coordinate, positive to the left of the initial heading
        ys = [left.y, straight.y, right.y]
        assert ys[0] > ys[1] > ys[2]


def test_collision_predicate_symmetric_and_sane():
    a = VehicleState(x=0.0, y=0.0, v=0.0, heading=0.2)
    b = VehicleState(x=2.5, y=0.5, v=0.0, heading=-0.4)
    far = VehicleState(x=50.0, y=0.0, v=0.0, heading=0.0)
    assert collides(a, b, 4.0, 2.0) == collides(b, a, 4.0, 2.0)
    assert collides(a, a, 4.0, 2.0)
    assert not collides(a, far, 4.0, 2.0)
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = VehicleState(*rng.uniform(-5, 5, size=2), 0.0, rng.uniform(-3, 3))
        q = VehicleState(*rng.uniform(-5, 5, size=2), 0.0, rng.uniform(-3, 3))
        assert collides(p, q, 4.0, 2.0) == collides(q, p, 4.0, 2.0)


# ---- track geometry -----------------------------------------------------------

def test_track_boundary_distance_zero_inside():
    track = Track()
    assert track.boundary_distance((32.0, 0.0)) == 0.0
    assert track.boundary_distance((44.0, 0.0)) == pytest.approx(4.0)
    assert track.boundary_distance((20.0, 0.0)) == pytest.approx(5.0)


def test_track_requires_ordered_radii():
    with pytest.raises(ValueError):
        Track(r_inner=40.0, r_outer=25.0)


def test_wrap_angle_range():
    for a in np.linspace(-10, 10, 101):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-12)


# ---- point costs ----------------------------------------------------------------

def test_progress_zero_at_equal_angles():
    track = Track()
    for structure in ("linear", "rbf"):
        c1, _, _ = point_costs((30.0, 0.0), 0.7, 0.7, (0.0, 30.0), track, CostParams(structure=structure))
        assert c1 == 0.0


def test_rbf_zero_cases():
    track = Track()
    params = CostParams(structure="rbf")
    p = (track.r_center, 0.0)
    _, c2, c3 = point_costs(p, 0.0, 0.0, p, track, params)
    assert c2 == pytest.approx(0.0)
    assert c3 == pytest.approx(1.0)


def test_linear_proximity_indicator():
    track = Track()
    params = CostParams(structure="linear", tau=8.0, q=8.0)
    _, _, c3 = point_costs((30.0, 0.0), 0.0, 0.0, (30.0 + 8.0, 0.0), track, params)
    assert c3 == 0.0
    _, _, near = point_costs((30.0, 0.0), 0.0, 0.0, (33.0, 0.0), track, params)
    assert near == pytest.approx(5.0)


def test_rbf_ranges_and_monotonicity():
    track = Track()
    params = CostParams(structure="rbf")
    dists = np.linspace(0.0, 30.0, 40)
    prox = [point_costs((30.0, 0.0), 0.0, 0.0, (30.0 + d, 0.0), track, params)[2] for d in dists]
    assert all(0.0 < c <= 1.0 for c in prox)
    assert all(a > b for a, b in zip(prox, prox[1:]))
    offsets = np.linspace(0.0, 7.0, 20)
    bounds = [point_costs((track.r_center + d, 0.0), 0.0, 0.0, (0.0, 0.0), track, params)[1] for d in offsets]
    assert all(0.0 <= c < 1.0 for c in bounds)
    assert all(a < b for a, b in zip(bounds, bounds[1:]))


# ---- cost tensors -----------------------------------------------------------------

def _mirror_state(s: VehicleState) -> VehicleState:
    return VehicleState(x=-s.x, y=-s.y, v=s.v, heading=wrap_angle(s.heading + math.pi), slip=s.slip)


def test_mirrored_players_have_transposed_proximity():
    track = Track()
    params = CostParams(structure="rbf")
    s1 = VehicleState(x=32.5, y=0.0, v=6.0, heading=math.pi / 2)
    s2 = _mirror_state(s1)
    kw = dict(dt=0.1, horizon=1.0, v_max=8.0)
    t1 = generate_trajectories(s1, 2.0, 0.1, **kw)
    t2 = generate_trajectories(s2, 2.0, 0.1, **kw)
    C1, C2 = build_cost_tensors(t1, t2, track, params, dt=0.1)
    np.testing.assert_allclose(C2[2], C1[2].T, atol=1e-9)


def test_distant_opponent_zeroes_linear_proximity():
    track = Track()
    params = CostParams(structure="linear")
    s1 = VehicleState(x=32.5, y=0.0, v=6.0, heading=math.pi / 2)
    s2 = VehicleState(x=-32.5, y=0.0, v=6.0, heading=-math.pi / 2)
    kw = dict(dt=0.1, horizon=1.0, v_max=8.0)
    C1, C2 = build_cost_tensors(
        generate_trajectories(s1, 2.0, 0.1, **kw),
        generate_trajectories(s2, 2.0, 0.1, **kw),
        track, params, dt=0.1,
    )
    assert not C1[2].any() and not C2[2].any()


def test_refinement_changes_costs_under_five_percent():
    track = Track()
    params = CostParams(structure="rbf")
    s1 = VehicleState(x=32.5, y=0.0, v=6.0, heading=math.pi / 2)
    s2 = VehicleState(x=30.0, y=9.0, v=5.0, heading=math.pi / 2 + 0.3)
    tensors = {}
    for dt in (0.1, 0.05):
        t1 = generate_trajectories(s1, 2.0, 0.1, dt=dt, horizon=1.0, v_max=9.0)
        t2 = generate_trajectories(s2, 2.0, 0.1, dt=dt, horizon=1.0, v_max=9.0)
        tensors[dt], _ = build_cost_tensors(t1, t2, track, params, dt=dt)
    for h in range(3):
        coarse, fine = tensors[0.1][h], tensors[0.05][h]
        assert np.linalg.norm(fine - coarse) / np.linalg.norm(coarse) < 0.05


# ---- race loop -----------------------------------------------------------------------

def test_config_validation_reports_fields():
    with pytest.raises(ConfigError, match="scenario"):
        RaceConfig(scenario="nowhere")
    with pytest.raises(ConfigError, match="theta1"):
        RaceConfig(theta1=(0.0, 0.0, 0.0))
    with pytest.raises(ConfigError, match="rounds"):
        RaceConfig(rounds=31)
    with pytest.raises(ConfigError, match="unknown"):
        RaceConfig.from_dict({"scenario": "close_tail", "bogus": 1})


def test_spawn_scenarios_place_attacker_behind():
    for scenario in ("close_tail", "far_tail", "inside_edge", "outside_edge"):
        cfg = RaceConfig(scenario=scenario)
        attacker, defender, a0, d0 = spawn_states(cfg)
        assert d0 > a0
        assert cfg.track.contains((attacker.x, attacker.y))
        assert cfg.track.contains((defender.x, defender.y))


def test_identical_config_is_bit_identical():
    cfg = dict(scenario="far_tail", method="vector", theta1=(0.5, 0.4, 0.6), rounds=8)
    a = run_race(RaceConfig(**cfg))
    b = run_race(RaceConfig(**cfg))
    assert json.dumps(a.to_json_dict(), sort_keys=True) == json.dumps(b.to_json_dict(), sort_keys=True)


def test_stationary_defender_is_passed_quickly():
    cfg = RaceConfig(
        scenario="close_tail",
        method="scalar",
        theta1=(1.0, 0.5, 0.5),
        physics=PhysicsParams(v_max_defender=0.0, v0_defender=0.0),
    )
    rec = run_race(cfg)
    assert rec.passed
    assert rec.lead_fraction > 0.5  # led for most of the race, not just at the end


def test_bounds_blind_attacker_exits_in_raw_frame():
    # with raw steering and a horizon long enough for the inward-spiral payoff,
    # zero bounds weight sheds the only pull toward the annulus
    phys = PhysicsParams(road_frame=False, horizon=2.0)
    blind = sum(
        run_race(RaceConfig(scenario="outside_edge", method="scalar", theta1=th, physics=phys)).out_of_bounds
        for th in ((1.0, 0.0, 0.0), (0.5, 0.0, 0.0), (0.5, 0.0, 0.3))
    )
    weighted = sum(
        run_race(RaceConfig(scenario="outside_edge", method="scalar", theta1=th, physics=phys)).out_of_bounds
        for th in ((1.0, 1.0, 0.0), (0.5, 1.0, 0.3))
    )
    assert blind == 3 and weighted == 0


def test_vector_rounds_replayable_from_record():
    cfg = RaceConfig(scenario="close_tail", method="vector", theta1=(0.4, 0.6, 0.5), rounds=12)
    rec = run_race(cfg)
    adjusted = [rl for rl in rec.rounds if rl.method == "adjusted"]
    assert adjusted, "expected at least one adjusted round in this configuration"
    for rl in adjusted:
        D2 = scalarize(rl.C2, cfg.theta2)
        assert rl.col == security_policy_col(D2)[0]
        mods = moderate_set(rl.C1, rl.col, tie_tol=cfg.tie_tol, tie_frac=cfg.tie_frac)
        assert rl.row in mods


def test_collided_implies_contact_scale_distance():
    # contact between 4 x 2 rectangles cannot happen beyond the half-diagonal sum
    cfg = RaceConfig(scenario="close_tail", method="scalar", theta1=(0.9, 0.9, 0.05))
    rec = run_race(cfg)
    if rec.collided:
        assert rec.min_distance <= 2.0 * math.hypot(2.0, 1.0) + 1e-9


# ---- feature table ----------------------------------------------------------------------

def test_feature_columns_parse_round_trip():
    cols = feature_columns(rounds=3)
    kinds = set()
    for name in cols:
        parsed = parse_column(name)
        kinds.add(parsed[0])
        if parsed[0] == "cost":
            _, cname, i, n, m, r = parsed
            assert name == f"{cname}{i}_{n}_{m}_{r}"
        elif parsed[0] == "state":
            _, i, var, r = parsed
            assert name == f"State{i}_{var}_{r}"
    assert kinds == {"meta", "action", "state", "cost"}
    assert len(cols) == len(set(cols))


def test_parse_column_rejects_malformed():
    for bad in ("Prog3_1_1_1", "State1_q_2", "Prog1_1_1", "Totally_bogus"):
        with pytest.raises(ValueError):
            parse_column(bad)


def test_record_row_matches_record():
    cfg = RaceConfig(scenario="close_tail", method="scalar", theta1=(0.5, 0.5, 0.5), rounds=2)
    rec = run_race(cfg)
    row = record_row(rec, "race_0007")
    assert row["race_id"] == "race_0007"
    assert row["passed"] == int(rec.passed)
    rl = rec.rounds[0]
    assert row["Act1_1"] == rl.row and row["Act2_1"] == rl.col
    assert row["State1_v_1"] == rl.state1.v
    assert row["Prog1_2_4_1"] == rl.C1[0, 1, 3]
    assert row["Prox2_9_9_2"] == rec.rounds[1].C2[2, 8, 8]
    expected = feature_columns(rounds=2)
    assert set(row) <= set(expected)


def test_linear_structure_reverts_to_scalar_almost_always():
    adjusted = rounds = 0
    for scenario in ("close_tail", "inside_edge"):
        for theta1 in ((0.5, 0.5, 0.5), (0.83, 0.17, 0.5)):
            rec = run_race(RaceConfig(scenario=scenario, method="vector", theta1=theta1, structure="linear"))
            rounds += len(rec.rounds)
            adjusted += sum(rl.method == "adjusted" for rl in rec.rounds)
    assert adjusted / rounds < 0.05
