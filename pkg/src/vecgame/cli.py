"""Command-line entry point: race, grid, explore, surface, report."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .explorer.boundary import ExploreConfig, explore
from .explorer.classifiers import (
    METRICS,
    WEIGHT_SPACE,
    HalfSpaceClassifier,
    PlaneClassifier,
    SphereClassifier,
    race_predicate,
)
from .explorer.grid import grid_points
from .explorer.protocol import make_race_evaluator, serve_evaluator
from .manifest import RunManifest, config_hash
from .race_sim import RaceConfig, run_race
from .race_sim.costs import CostParams, point_costs
from .race_sim.features import write_feature_csv
from .race_sim.race import METHODS, SCENARIOS
from .race_sim.track import Track
from .report import summarize_feature_csv, summarize_records

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

ALL_SCENARIOS = tuple(SCENARIOS)


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _out_root(args) -> Path:
    root = args.out or os.environ.get("VECGAME_OUT") or "out"
    return Path(root)


def _run_dir(args, command: str, payload: dict) -> Path:
    digest = config_hash({"command": command, "config": payload})[:12]
    run_dir = _out_root(args) / f"{command}-{digest}"
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _race_config_from(raw: dict, args) -> RaceConfig:
    data = dict(raw)
    for name in ("method", "scenario", "structure"):
        value = getattr(args, name, None)
        if value:
            data[name] = value
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    return RaceConfig.from_dict(data)


def cmd_race(args) -> int:
    raw = _load_config(args.config)
    config = _race_config_from(raw, args)
    run_dir = _run_dir(args, "race", config.to_dict())
    solve_entries = []
    record = run_race(config, solve_log=solve_entries.append if args.solve_log else None)
    if args.solve_log:
        with open(run_dir / "solves.jsonl", "w") as fh:
            for entry in solve_entries:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
    _write_json(run_dir / "race.json", record.to_json_dict())
    write_feature_csv(run_dir / "race.csv", [record], race_ids=["race_0000"])
    manifest = RunManifest(
        command="race", config=config.to_dict(), seed=config.seed, version=__version__,
        outputs=["race.json", "race.csv"],
    ).finalize()
    manifest.write(run_dir / "manifest.json")
    print(f"wrote {run_dir}/race.json (passed={record.passed}, oob={record.out_of_bounds})")
    return EXIT_OK


def _grid_configs(raw: dict, args) -> tuple[list[RaceConfig], dict]:
    grid = raw.get("grid", {})
    intervals = grid.get("intervals", 5)
    scenarios = raw.get("scenarios", list(ALL_SCENARIOS))
    methods = raw.get("methods", list(METHODS))
    if args.scenario:
        scenarios = [args.scenario]
    if args.method:
        methods = [args.method]
    base = dict(raw.get("race", {}))
    if args.structure:
        base["structure"] = raw["structure"] = args.structure
    elif "structure" in raw:
        base["structure"] = raw["structure"]
    if args.seed is not None:
        base["seed"] = args.seed
    elif "seed" in raw:
        base["seed"] = raw["seed"]
    if "rounds" in raw:
        base.setdefault("rounds", raw["rounds"])
    bad = [s for s in scenarios if s not in SCENARIOS] + [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"invalid scenarios/methods: {bad}")
    configs = []
    for method in methods:
        for scenario in scenarios:
            for theta in grid_points(intervals):
                configs.append(RaceConfig(scenario=scenario, method=method, theta1=theta, **base))
    payload = {"grid": {"intervals": intervals}, "scenarios": scenarios, "methods": methods, "race": base}
    return configs, payload


def _safe_run(config: RaceConfig):
    try:
        return run_race(config), None
    except Exception as exc:  # recorded per-race; the batch continues
        return None, f"{type(exc).__name__}: {exc}"


def cmd_grid(args) -> int:
    raw = _load_config(args.config)
    configs, payload = _grid_configs(raw, args)
    run_dir = _run_dir(args, "grid", payload)

    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_safe_run, configs))
    else:
        results = [_safe_run(cfg) for cfg in configs]

    records, failures = [], []
    for idx, (record, error) in enumerate(results):
        if record is not None:
            records.append((idx, record))
        else:
            failures.append({"index": idx, "config": configs[idx].to_dict(), "error": error})

    race_ids = [f"race_{idx:04d}" for idx, _ in records]
    write_feature_csv(run_dir / "features.csv", [rec for _, rec in records], race_ids=race_ids)
    by_method: dict[str, list] = {}
    for _, rec in records:
        by_method.setdefault(rec.config.method, []).append(rec)
    table = summarize_records(by_method)
    _write_json(run_dir / "summary.json", table.as_dict())
    (run_dir / "summary.txt").write_text(table.to_text() + "\n")
    outputs = ["features.csv", "summary.json", "summary.txt"]
    if failures:
        _write_json(run_dir / "failures.json", failures)
        outputs.append("failures.json")
    manifest = RunManifest(
        command="grid", config=payload, seed=int(payload["race"].get("seed", 0)),
        version=__version__, outputs=outputs,
    ).finalize()
    manifest.write(run_dir / "manifest.json")
    print(table.to_text())
    print(f"wrote {run_dir} ({len(records)} races, {len(failures)} failures)")
    return EXIT_OK


_SELFTEST_CLASSIFIERS = {
    "sphere": lambda: SphereClassifier(center=(0.5, 0.5, 0.5), radius=0.3),
    "plane": lambda: PlaneClassifier(normal=(1.0, 1.0, 1.0), offset=0.9),
    "halfspace": lambda: HalfSpaceClassifier(axis=0, threshold=0.5),
}


def _boundary_json(report, space) -> dict:
    body = {
        "samples_used": report.samples_used,
        "volume_estimate": report.volume_estimate,
        "termination": report.termination,
        "n_boundary_points": len(report.boundary),
        "boundary": [],
    }
    for s in report.boundary:
        entry = {
            "inside": s.inside.tolist(),
            "outside": s.outside.tolist(),
            "midpoint": s.midpoint.tolist(),
            "normal": s.normal.tolist(),
        }
        if space is not None:
            entry["theta_midpoint"] = space.from_unit(s.midpoint).tolist()
        body["boundary"].append(entry)
    return body


def _boundary_csv(path: Path, report, space) -> None:
    with open(path, "w") as fh:
        fh.write("theta1,theta2,theta3,class,nx,ny,nz\n")
        for s in report.boundary:
            for point, cls in ((s.inside, "success"), (s.outside, "failure")):
                raw = space.from_unit(point) if space is not None else point
                n = s.normal
                fh.write(
                    f"{float(raw[0])!r},{float(raw[1])!r},{float(raw[2])!r},{cls},"
                    f"{float(n[0])!r},{float(n[1])!r},{float(n[2])!r}\n"
                )


def cmd_explore(args) -> int:
    raw = _load_config(args.config)
    explore_cfg = ExploreConfig(**raw.get("explore", {}))
    if args.seed is not None:
        explore_cfg = ExploreConfig(**{**raw.get("explore", {}), "seed": args.seed})

    if args.serve:
        overrides = dict(raw.get("race", {}))
        if args.structure:
            overrides["structure"] = args.structure
        server = serve_evaluator(make_race_evaluator(**overrides), host=args.host, port=args.port, background=False)
        print(f"serving remote evaluation on {server.server_address[0]}:{server.server_address[1]}")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        return EXIT_OK

    if args.selftest:
        predicate = _SELFTEST_CLASSIFIERS[args.selftest]()
        space = None
        cell = {"selftest": args.selftest, "explore": explore_cfg.__dict__}
        run_dir = _run_dir(args, "explore", cell)
        report = explore(predicate, space, explore_cfg)
        ok = _selftest_ok(args.selftest, predicate, report, explore_cfg)
        _write_json(run_dir / "report.json", _boundary_json(report, space))
        _boundary_csv(run_dir / "boundary.csv", report, space)
        print(f"selftest {args.selftest}: {'PASS' if ok else 'FAIL'} "
              f"(points={len(report.boundary)}, samples={report.samples_used}, volume={report.volume_estimate:.3f})")
        return EXIT_OK if ok else EXIT_RUNTIME

    cells = raw.get("cells")
    if raw.get("batch"):
        cells = [
            {"scenario": s, "metric": met, "method": m}
            for met in METRICS for s in ALL_SCENARIOS for m in METHODS
        ]
    if cells is None:
        cell = {
            "scenario": args.scenario or raw.get("scenario"),
            "method": args.method or raw.get("method"),
            "metric": args.metric or raw.get("metric"),
        }
        missing = [k for k, v in cell.items() if not v]
        if missing:
            raise ConfigError(f"explore requires {missing} via config or flags")
        cells = [cell]

    overrides = dict(raw.get("race", {}))
    if args.structure:
        overrides["structure"] = args.structure
    payload = {"cells": cells, "explore": explore_cfg.__dict__, "race": overrides}
    run_dir = _run_dir(args, "explore", payload)
    table = {}
    outputs = []
    for idx, cell in enumerate(cells):
        predicate = race_predicate(cell["scenario"], cell["method"], cell["metric"], **overrides)
        report = explore(predicate, WEIGHT_SPACE, explore_cfg)
        stem = f"cell_{idx:02d}_{cell['scenario']}_{cell['metric']}_{cell['method']}"
        _write_json(run_dir / f"{stem}.json", {**cell, **_boundary_json(report, WEIGHT_SPACE)})
        _boundary_csv(run_dir / f"{stem}.csv", report, WEIGHT_SPACE)
        outputs += [f"{stem}.json", f"{stem}.csv"]
        table.setdefault(cell["metric"], {}).setdefault(cell["scenario"], {})[cell["method"]] = round(
            report.volume_estimate, 3
        )
        print(f"{stem}: volume={report.volume_estimate:.3f} termination={report.termination} "
              f"samples={report.samples_used}")
    _write_json(run_dir / "volumes.json", table)
    outputs.append("volumes.json")
    manifest = RunManifest(
        command="explore", config=payload, seed=explore_cfg.seed, version=__version__, outputs=outputs
    ).finalize()
    manifest.write(run_dir / "manifest.json")
    return EXIT_OK


def _selftest_ok(kind: str, predicate, report, cfg: ExploreConfig) -> bool:
    if report.samples_used > cfg.max_samples:
        return False
    if not report.boundary:
        return False
    mids = np.array([s.midpoint for s in report.boundary])
    if kind == "sphere":
        radii = np.linalg.norm(mids - 0.5, axis=1)
        return bool(np.all(np.abs(radii - 0.3) <= cfg.resolution))
    if kind == "plane":
        n = np.ones(3) / math.sqrt(3.0)
        dist = np.abs(mids @ n - 0.9)  # offset is along the unit normal
        return bool(np.all(dist <= cfg.resolution))
    if kind == "halfspace":
        return bool(np.all(np.abs(mids[:, 0] - 0.5) <= cfg.resolution))
    return False


def cmd_surface(args) -> int:
    raw = _load_config(args.config)
    structure = args.structure or raw.get("structure", "rbf")
    weights = raw.get("weights", [1.0, 1.0, 1.0])
    track = Track(**raw["track"]) if isinstance(raw.get("track"), dict) else Track()
    params = CostParams(structure=structure, **raw.get("costs", {}))
    if "opponent" in raw:
        opponent = tuple(raw["opponent"])
    else:
        ang = raw.get("opponent_angle", 0.8)
        rad = raw.get("opponent_radius", track.r_center)
        opponent = (track.center[0] + rad * math.cos(ang), track.center[1] + rad * math.sin(ang))
    grid_n = int(raw.get("grid_n", 81))
    pad = float(raw.get("padding", 5.0))
    payload = {"structure": structure, "weights": weights, "opponent": list(opponent), "grid_n": grid_n, "padding": pad}
    run_dir = _run_dir(args, "surface", payload)

    extent = track.r_outer + pad
    xs = np.linspace(track.center[0] - extent, track.center[0] + extent, grid_n)
    ys = np.linspace(track.center[1] - extent, track.center[1] + extent, grid_n)
    beta = track.angle_of(opponent)
    with open(run_dir / "surface.csv", "w") as fh:
        fh.write("x,y,cost\n")
        for y in ys:
            for x in xs:
                alpha = track.angle_of((x, y))
                c1, c2, c3 = point_costs((x, y), alpha, beta, opponent, track, params)
                cost = weights[0] * c1 + weights[1] * c2 + weights[2] * c3
                fh.write(f"{float(x)!r},{float(y)!r},{float(cost)!r}\n")
    manifest = RunManifest(
        command="surface", config=payload, seed=args.seed or 0, version=__version__, outputs=["surface.csv"]
    ).finalize()
    manifest.write(run_dir / "manifest.json")
    print(f"wrote {run_dir}/surface.csv ({grid_n}x{grid_n})")
    return EXIT_OK


def cmd_report(args) -> int:
    path = Path(args.input)
    if path.is_dir():
        path = path / "features.csv"
    if not path.exists():
        raise ConfigError(f"no feature CSV at {path}")
    table = summarize_feature_csv(path)
    print(table.to_text())
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_json(out_dir / "summary.json", table.as_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vecgame", description="Vector-cost bimatrix racing toolkit")
    parser.add_argument("--version", action="version", version=f"vecgame {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_jobs=False):
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", help="output root (default $VECGAME_OUT or ./out)")
        p.add_argument("--method", choices=METHODS, default=None)
        p.add_argument("--scenario", choices=ALL_SCENARIOS, default=None)
        p.add_argument("--structure", choices=("linear", "rbf"), default=None)
        if with_jobs:
            p.add_argument("--jobs", type=int, default=1)

    p_race = sub.add_parser("race", help="run a single race")
    common(p_race)
    p_race.add_argument("--solve-log", action="store_true", help="dump every adjustment solve as JSONL")
    p_race.set_defaults(func=cmd_race)

    p_grid = sub.add_parser("grid", help="weight grid search over scenarios and methods")
    common(p_grid, with_jobs=True)
    p_grid.set_defaults(func=cmd_grid)

    p_exp = sub.add_parser("explore", help="boundary exploration of the weight space")
    common(p_exp)
    p_exp.add_argument("--metric", choices=METRICS, default=None)
    p_exp.add_argument("--serve", action="store_true", help="serve the remote evaluation protocol")
    p_exp.add_argument("--host", default="127.0.0.1")
    p_exp.add_argument("--port", type=int, default=0)
    p_exp.add_argument("--selftest", choices=sorted(_SELFTEST_CLASSIFIERS), default=None)
    p_exp.set_defaults(func=cmd_explore)

    p_surf = sub.add_parser("surface", help="export a weighted point-cost surface grid")
    common(p_surf)
    p_surf.set_defaults(func=cmd_surface)

    p_rep = sub.add_parser("report", help="recompute the summary table from a feature CSV")
    p_rep.add_argument("input", help="feature CSV or grid output directory")
    p_rep.add_argument("--out", help="directory for summary.json")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
