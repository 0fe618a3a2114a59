"""vecgame-xai: surrogate-based feature analysis of race feature tables."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .columns import COST_NAMES, ColumnError
from .frame import TARGETS, FeatureFrame
from .heatmap import heatmap_export
from .importance import importance_report, mean_report
from .surrogate import DegenerateTargetError, train_surrogate


def analyze(
    csv_path,
    target: str,
    out_dir,
    rounds=None,
    method: str = "path",
    seed: int = 0,
    split_by_method: bool = False,
    heatmaps: bool = False,
    top_k: int = 25,
) -> dict:
    frame = FeatureFrame.load(csv_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    groups = {"all": frame}
    if split_by_method:
        groups = {
            str(m): frame.subset(frame.data["method"] == m)
            for m in sorted(frame.data["method"].unique())
        }

    summary = {"csv": str(csv_path), "target": target, "method": method, "groups": {}}
    for label, group in groups.items():
        if target == "action":
            round_list = rounds or [max(
                info.round for info in group.columns.values() if info.kind == "action"
            )]
            reports = []
            for r in round_list:
                surrogate = train_surrogate(group, "action", round_index=r, seed=seed)
                reports.append(importance_report(surrogate, group, method=method,
                                                 round_index=r, top_k=top_k, seed=seed))
            report = mean_report(reports) if len(reports) > 1 else reports[0]
        else:
            surrogate = train_surrogate(group, target, seed=seed)
            report = importance_report(surrogate, group, method=method, top_k=top_k, seed=seed)

        body = report.as_dict()
        if heatmaps:
            for cost_type in COST_NAMES:
                for player in (1, 2):
                    heatmap_export(report, cost_type, player, out_dir / label)
        summary["groups"][label] = body

    with open(out_dir / "report.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vecgame-xai",
                                     description="Feature-importance analysis of race feature CSVs")
    parser.add_argument("csv", help="feature CSV produced by the race grid")
    parser.add_argument("--target", choices=TARGETS, required=True)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--rounds", type=int, nargs="*", default=None,
                        help="rounds for the action target (default: final round)")
    parser.add_argument("--method", choices=("path", "permutation"), default="path")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--top", type=int, default=25)
    parser.add_argument("--split-by-method", action="store_true",
                        help="fit one surrogate per attacker method")
    parser.add_argument("--heatmaps", action="store_true",
                        help="export per-cost-type (n, m) heatmaps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        summary = analyze(
            args.csv, args.target, args.out, rounds=args.rounds, method=args.method,
            seed=args.seed, split_by_method=args.split_by_method,
            heatmaps=args.heatmaps, top_k=args.top,
        )
    except (ColumnError, DegenerateTargetError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for label, body in summary["groups"].items():
        print(f"{label}: entropy={body['entropy_nats']:.3f} nats, "
              f"top feature {body['top'][0][0]} ({body['top'][0][1]:.4g})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
