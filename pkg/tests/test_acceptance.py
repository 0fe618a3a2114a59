"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred to calibration.
"""

import json
import math
import time

import numpy as np

from vecgame.cli import main
from vecgame.cost_adjust import check_feasibility, select_policy, solve_adjustment
from vecgame.explorer import (
    ExploreConfig,
    HalfSpaceClassifier,
    PlaneClassifier,
    SphereClassifier,
    explore,
    grid_points,
)
from vecgame.explorer.classifiers import WEIGHT_SPACE, race_predicate
from vecgame.explorer.volume import monte_carlo_volume
from vecgame.game_core import (
    is_nash,
    moderate_set,
    pareto_set,
    scalarize,
    security_policy_col,
    security_policy_row,
    worst_set,
)
from vecgame.race_sim import (
    CostParams,
    RaceConfig,
    Track,
    VehicleState,
    build_cost_tensors,
    generate_trajectories,
    run_race,
    step_bicycle,
)
from vecgame.race_sim.vehicle import ActionSpec

SCENARIOS = ("close_tail", "far_tail", "inside_edge", "outside_edge")


def _phi_invariants_hold(sol) -> bool:
    r, c = sol.minimum
    if sol.constraint_residual > 1e-6 or abs(sol.potential[r - 1, c - 1]) > 1e-8:
        return False
    others = sol.potential.copy()
    others[r - 1, c - 1] = np.inf
    return bool(others.min() >= sol.eps - 1e-8)


def test_theorem1_nash_and_security_equivalence():
    """Adjusted selections are Nash and security policies; zero violations."""
    start = time.time()
    rng = np.random.default_rng(101)
    adjusted = violations = 0

    for _ in range(500):
        C1 = rng.uniform(0.0, 1.0, size=(3, 9, 9))
        D2 = rng.uniform(0.0, 1.0, size=(9, 9))
        theta1 = rng.uniform(0.05, 1.0, size=3)
        res = select_policy(C1, D2, theta1)
        if res.method != "adjusted":
            continue
        adjusted += 1
        adjusted_matrix = C1[0] + res.solution.adjustment
        pair = (res.row_policy, res.col_policy)
        if not is_nash(adjusted_matrix, D2, pair):
            violations += 1
        if security_policy_row(adjusted_matrix)[0] != res.row_policy:
            violations += 1
        if security_policy_col(D2)[0] != res.col_policy:
            violations += 1

    race_rounds = 0
    for scenario in SCENARIOS:
        for theta in grid_points((5, 5, 1)):
            record = run_race(RaceConfig(scenario=scenario, method="vector", theta1=theta))
            cfg = record.config
            for rl in record.rounds:
                if rl.method != "adjusted":
                    continue
                race_rounds += 1
                D2 = scalarize(rl.C2, cfg.theta2)
                res = select_policy(rl.C1, D2, cfg.theta1, eps=cfg.eps,
                                    tie_tol=cfg.tie_tol, tie_frac=cfg.tie_frac)
                assert res.method == "adjusted"
                assert (res.row_policy, res.col_policy) == (rl.row, rl.col)
                adjusted_matrix = rl.C1[0] + res.solution.adjustment
                if not is_nash(adjusted_matrix, D2, (rl.row, rl.col)):
                    violations += 1
                if security_policy_row(adjusted_matrix)[0] != rl.row:
                    violations += 1
                if security_policy_col(D2)[0] != rl.col:
                    violations += 1

    elapsed = time.time() - start
    assert adjusted >= 50, "random-game sweep produced too few adjusted cases to be meaningful"
    assert race_rounds >= 100, "race sweep produced too few adjusted rounds to be meaningful"
    assert violations == 0
    assert elapsed < 300.0
    print(f"\n[PASS] Theorem 1: {adjusted} adjusted random games + {race_rounds} adjusted race "
          f"rounds, 0 violations ({elapsed:.1f}s < 300s)")


def test_theorem2_feasibility_consistency():
    """check_feasibility <=> valid-potential solve, zero disagreements.

    The screen's margin equals the solver's strict-positivity eps, so the
    equivalence is exact (the eps-margin caveat the criterion logs).
    """
    start = time.time()
    rng = np.random.default_rng(202)
    disagreements = solves = 0
    for _ in range(500):
        D2 = rng.uniform(0.0, 1.0, size=(9, 9))
        C11 = rng.uniform(-1.0, 1.0, size=(9, 9))
        for r in range(1, 10):
            for c in range(1, 10):
                feasible = check_feasibility(D2, r, c)
                sol = solve_adjustment(C11, D2, r, c)
                valid = sol is not None and _phi_invariants_hold(sol)
                if sol is not None:
                    solves += 1
                if valid != feasible:
                    disagreements += 1
    elapsed = time.time() - start
    assert disagreements == 0
    assert solves >= 500
    print(f"\n[PASS] Theorem 2: 500 matrices x 81 cells, {solves} solves, "
          f"0 disagreements (eps-margin screen; {elapsed:.1f}s)")


def test_potential_residual_contract():
    """Accepted solutions: pairwise residual <= 1e-6, phi(r,c) = 0 +/- 1e-8."""
    rng = np.random.default_rng(303)
    accepted = 0
    worst_resid = worst_zero = 0.0
    while accepted < 500:
        D2 = rng.uniform(0.0, 1.0, size=(6, 6))
        C11 = rng.uniform(-2.0, 2.0, size=(6, 6))
        for r in range(1, 7):
            for c in range(1, 7):
                sol = solve_adjustment(C11, D2, r, c)
                if sol is None:
                    continue
                accepted += 1
                worst_resid = max(worst_resid, sol.constraint_residual)
                worst_zero = max(worst_zero, abs(sol.potential[r - 1, c - 1]))
                assert sol.constraint_residual <= 1e-6
                assert abs(sol.potential[r - 1, c - 1]) <= 1e-8
    print(f"\n[PASS] Residuals: {accepted} solutions, max pairwise residual "
          f"{worst_resid:.2e} <= 1e-6, max |phi(r,c)| {worst_zero:.2e} <= 1e-8")


def test_policy_set_oracle_equivalence():
    """Pareto/worst/moderate match brute force on 1000 random instances."""
    start = time.time()
    rng = np.random.default_rng(404)
    for _ in range(1000):
        g = int(rng.integers(1, 5))
        n = int(rng.integers(1, 13))
        m = int(rng.integers(1, 13))
        C = rng.uniform(-3.0, 3.0, size=(g, n, m))
        sigma = int(rng.integers(1, m + 1))
        J = C[:, :, sigma - 1].T
        brute_pareto = {
            a + 1
            for a in range(n)
            if not any(b != a and np.all(J[b] <= J[a]) and np.any(J[b] < J[a]) for b in range(n))
        }
        brute_worst = set()
        for h in range(g):
            col = J[:, h]
            brute_worst |= {int(i) + 1 for i in np.flatnonzero(col == col.max())}
        assert set(pareto_set(C, sigma).members) == brute_pareto
        assert set(worst_set(C, sigma).members) == brute_worst
        assert set(moderate_set(C, sigma).members) == brute_pareto - brute_worst
    elapsed = time.time() - start
    assert elapsed < 60.0
    print(f"\n[PASS] Policy sets: 1000 instances (n<=12, g<=4) match brute force ({elapsed:.1f}s < 60s)")


def test_table1_directions_desk_scale():
    """Reduced grid: vector beats scalar on passes, out-of-bounds, min distance."""
    start = time.time()
    stats = {}
    for method in ("scalar", "vector"):
        passes = oob = 0
        min_dists = []
        for scenario in SCENARIOS:
            for theta in grid_points(3):
                record = run_race(RaceConfig(scenario=scenario, method=method, theta1=theta))
                passes += record.passed
                oob += record.out_of_bounds
                min_dists.append(record.min_distance)
        stats[method] = (passes, oob, float(np.mean(min_dists)))
    elapsed = time.time() - start
    s, v = stats["scalar"], stats["vector"]
    assert v[0] > s[0], f"vector passes {v[0]} must exceed scalar {s[0]}"
    assert v[1] < s[1], f"vector OOB {v[1]} must be below scalar {s[1]}"
    assert v[2] > s[2], f"vector avg min distance {v[2]:.2f} must exceed scalar {s[2]:.2f}"
    assert elapsed < 900.0
    print(f"\n[PASS] Desk-scale comparison (108 races/method): passes {v[0]}>{s[0]}, "
          f"OOB {v[1]}<{s[1]}, avg min dist {v[2]:.2f}>{s[2]:.2f} m ({elapsed:.0f}s < 900s)")


def test_table2_direction_inside_edge_passes():
    """Success-mode volume: vector exceeds scalar by >= 0.15 at 100-sample cap."""
    start = time.time()
    cfg = ExploreConfig(max_samples=100, volume_samples=20_000, seed=7)
    volumes = {}
    for method in ("scalar", "vector"):
        report = explore(race_predicate("inside_edge", method, "passes"), WEIGHT_SPACE, cfg)
        assert report.samples_used <= 100
        volumes[method] = report.volume_estimate
    elapsed = time.time() - start
    diff = volumes["vector"] - volumes["scalar"]
    assert diff >= 0.15, f"volume difference {diff:.3f} below 0.15"
    print(f"\n[PASS] Volume direction: inside-edge/passes vector {volumes['vector']:.3f} "
          f"vs scalar {volumes['scalar']:.3f} (diff {diff:.3f} >= 0.15, {elapsed:.0f}s)")


def test_boundary_explorer_analytic_validation():
    """Plane/sphere/half-space: midpoints within 0.07, volumes within 0.02, caps held."""
    resolution = 0.07
    cases = {
        "plane": (
            PlaneClassifier(normal=(1.0, 1.0, 1.0), offset=0.9),
            lambda mid: abs(float(mid @ (np.ones(3) / math.sqrt(3.0))) - 0.9),
        ),
        "sphere": (
            SphereClassifier(center=(0.5, 0.5, 0.5), radius=0.3),
            lambda mid: abs(float(np.linalg.norm(mid - 0.5)) - 0.3),
        ),
        "halfspace": (
            HalfSpaceClassifier(axis=0, threshold=0.5),
            lambda mid: abs(float(mid[0]) - 0.5),
        ),
    }
    for name, (clf, surface_dist) in cases.items():
        report = explore(clf, None, ExploreConfig(resolution=resolution, max_samples=500,
                                                  volume_samples=1000, seed=11))
        assert report.samples_used <= 500
        assert len(report.boundary) >= 10
        worst = max(surface_dist(s.midpoint) for s in report.boundary)
        assert worst <= resolution, f"{name}: midpoint {worst:.3f} beyond resolution"

    # volume accuracy at 1e5 samples, direct Monte Carlo against analytic truth
    s = 0.9 * math.sqrt(3.0)
    plane_truth = (s**3 - 3 * (s - 1.0) ** 3) / 6.0  # Irwin-Hall CDF, 1 < s < 2
    truths = {
        "plane": (cases["plane"][0], plane_truth),
        "sphere": (SphereClassifier(center=(0.5, 0.5, 0.5), radius=0.4),
                   1.0 - 4.0 / 3.0 * math.pi * 0.4**3),
        "halfspace": (cases["halfspace"][0], 0.5),
    }
    for name, (clf, truth) in truths.items():
        est = monte_carlo_volume(clf, 100_000, seed=13)
        assert abs(est - truth) <= 0.02, f"{name}: |{est:.4f} - {truth:.4f}| > 0.02"
    print("\n[PASS] Boundary explorer: analytic surfaces within 0.07, volumes within "
          "0.02 at 1e5 samples, caps never exceeded")


def test_bicycle_model_checks():
    """Closed-form straight/turn trajectories within 1e-3; refinement < 5%."""
    # straight line
    state = VehicleState(x=0.0, y=0.0, v=6.0, heading=0.25)
    cur = state
    for _ in range(100):
        cur = step_bicycle(cur, ActionSpec(5, 0.0, 0.0), dt=0.01, v_max=10.0)
    expected = 6.0 * 1.0
    got = math.hypot(cur.x, cur.y)
    assert abs(got - expected) / expected < 1e-3
    assert cur.heading == state.heading

    # constant turn returns to start after one period within 1e-3 * R
    lf = lr = 1.0
    steer, v, dt = 0.3, 5.0, 1e-4
    slip = math.atan(lr * math.tan(steer) / (lf + lr))
    radius = lr / math.sin(slip)
    steps = round(2 * math.pi * radius / v / dt)
    cur = VehicleState(x=0.0, y=0.0, v=v, heading=0.0)
    for _ in range(steps):
        cur = step_bicycle(cur, ActionSpec(6, 0.0, steer), dt, v_max=10.0, lf=lf, lr=lr)
    assert math.hypot(cur.x, cur.y) < 1e-3 * radius

    # refinement: dt halving moves accumulated costs by < 5% per objective
    track = Track()
    params = CostParams(structure="rbf")
    s1 = VehicleState(x=32.5, y=0.0, v=6.0, heading=math.pi / 2)
    s2 = VehicleState(x=30.0, y=9.0, v=5.0, heading=math.pi / 2 + 0.3)
    tensors = {}
    for step_dt in (0.1, 0.05):
        t1 = generate_trajectories(s1, 2.0, 0.1, dt=step_dt, horizon=1.0, v_max=9.0)
        t2 = generate_trajectories(s2, 2.0, 0.1, dt=step_dt, horizon=1.0, v_max=9.0)
        tensors[step_dt], _ = build_cost_tensors(t1, t2, track, params, dt=step_dt)
    worst_change = 0.0
    for h in range(3):
        change = float(np.linalg.norm(tensors[0.05][h] - tensors[0.1][h]) / np.linalg.norm(tensors[0.1][h]))
        worst_change = max(worst_change, change)
        assert change < 0.05
    print(f"\n[PASS] Bicycle model: closed forms within 1e-3, refinement max change "
          f"{worst_change:.3f} < 0.05")


def test_determinism_byte_identical_outputs(tmp_path):
    """Identical config + seed produce byte-identical CSV/JSON artifacts."""
    race_cfg = tmp_path / "race.json"
    race_cfg.write_text(json.dumps({
        "scenario": "inside_edge", "method": "vector",
        "theta1": [0.4, 0.6, 0.5], "rounds": 6, "seed": 3,
    }))
    grid_cfg = tmp_path / "grid.json"
    grid_cfg.write_text(json.dumps({
        "grid": {"intervals": 1}, "scenarios": ["close_tail"],
        "methods": ["scalar", "vector"], "rounds": 4, "seed": 3,
    }))
    blobs = {}
    for tag in ("a", "b"):
        out = tmp_path / tag
        assert main(["race", "--config", str(race_cfg), "--out", str(out)]) == 0
        assert main(["grid", "--config", str(grid_cfg), "--out", str(out)]) == 0
        race_dir = next(p for p in out.iterdir() if p.name.startswith("race-"))
        grid_dir = next(p for p in out.iterdir() if p.name.startswith("grid-"))
        blobs[tag] = {
            "race.json": (race_dir / "race.json").read_bytes(),
            "race.csv": (race_dir / "race.csv").read_bytes(),
            "features.csv": (grid_dir / "features.csv").read_bytes(),
            "summary.json": (grid_dir / "summary.json").read_bytes(),
        }
    for name in blobs["a"]:
        assert blobs["a"][name] == blobs["b"][name], f"{name} differs between identical runs"
    print("\n[PASS] Determinism: race.json, race.csv, features.csv, summary.json byte-identical")
