"""Aggregate race statistics in the comparative-table layout."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

TIME_COMPLEXITY = {"scalar": "O(nmg)", "vector": "O(n^2m + nmg)"}

METRIC_ROWS = (
    "passes",
    "out_of_bounds",
    "collisions",
    "avg_min_distance_m",
    "avg_progress_cost",
    "avg_bounds_cost",
    "avg_proximity_cost",
    "lead_proportion_pct",
    "time_complexity",
)


@dataclass(frozen=True)
class SummaryTable:
    """Per-method aggregates over a batch of races."""

    methods: tuple[str, ...]
    rows: dict  # metric name -> {method: value}
    total_races: dict  # method -> count

    def as_dict(self) -> dict:
        return {"methods": list(self.methods), "rows": self.rows, "total_races": self.total_races}

    def to_text(self) -> str:
        width = max(len(r) for r in METRIC_ROWS) + 2
        header = "Metric".ljust(width) + "".join(m.rjust(14) for m in self.methods)
        lines = [header, "-" * len(header)]
        for name in METRIC_ROWS:
            cells = []
            for m in self.methods:
                v = self.rows[name][m]
                cells.append((f"{v:.3f}" if isinstance(v, float) else str(v)).rjust(14))
            lines.append(name.ljust(width) + "".join(cells))
        return "\n".join(lines)


def summarize_records(records_by_method: dict) -> SummaryTable:
    """Aggregate per-method RaceRecords into the 9-row summary layout."""
    methods = tuple(records_by_method)
    rows = {name: {} for name in METRIC_ROWS}
    totals = {}
    for method, records in records_by_method.items():
        records = list(records)
        totals[method] = len(records)
        rows["passes"][method] = sum(r.passed for r in records)
        rows["out_of_bounds"][method] = sum(r.out_of_bounds for r in records)
        rows["collisions"][method] = sum(r.collided for r in records)
        rows["avg_min_distance_m"][method] = float(np.mean([r.min_distance for r in records]))
        costs = np.array([r.attacker_cost_totals for r in records])
        rows["avg_progress_cost"][method] = float(costs[:, 0].mean())
        rows["avg_bounds_cost"][method] = float(costs[:, 1].mean())
        rows["avg_proximity_cost"][method] = float(costs[:, 2].mean())
        rows["lead_proportion_pct"][method] = float(100.0 * np.mean([r.lead_fraction for r in records]))
        rows["time_complexity"][method] = TIME_COMPLEXITY.get(method, "-")
    return SummaryTable(methods=methods, rows=rows, total_races=totals)


def summarize_feature_csv(path) -> SummaryTable:
    """Recompute the summary from a feature CSV alone.

    Chosen per-objective cost totals are rebuilt from the logged action
    indices and cost-matrix columns, so the table is fully reproducible
    from the flat file.
    """
    by_method: dict[str, dict[str, list]] = {}
    with open(path, newline="") as fh:
        lines = (ln for ln in fh if not ln.startswith("#"))
        reader = csv.DictReader(lines)
        for row in reader:
            method = row["method"]
            acc = by_method.setdefault(
                method,
                {"passed": [], "oob": [], "coll": [], "mind": [], "lead": [], "costs": []},
            )
            acc["passed"].append(int(row["passed"]))
            acc["oob"].append(int(row["out_of_bounds"]))
            acc["coll"].append(int(row["collided"]))
            acc["mind"].append(float(row["min_distance"]))
            acc["lead"].append(float(row["lead_fraction"]))
            totals = np.zeros(3)
            r = 1
            while f"Act1_{r}" in row and row[f"Act1_{r}"] != "":
                n, m = int(row[f"Act1_{r}"]), int(row[f"Act2_{r}"])
                for h, name in enumerate(("Prog", "Bound", "Prox")):
                    totals[h] += float(row[f"{name}1_{n}_{m}_{r}"])
                r += 1
            acc["costs"].append(totals)

    rows = {name: {} for name in METRIC_ROWS}
    totals_by_method = {}
    for method, acc in by_method.items():
        totals_by_method[method] = len(acc["passed"])
        rows["passes"][method] = int(sum(acc["passed"]))
        rows["out_of_bounds"][method] = int(sum(acc["oob"]))
        rows["collisions"][method] = int(sum(acc["coll"]))
        rows["avg_min_distance_m"][method] = float(np.mean(acc["mind"]))
        costs = np.array(acc["costs"])
        rows["avg_progress_cost"][method] = float(costs[:, 0].mean())
        rows["avg_bounds_cost"][method] = float(costs[:, 1].mean())
        rows["avg_proximity_cost"][method] = float(costs[:, 2].mean())
        rows["lead_proportion_pct"][method] = float(100.0 * np.mean(acc["lead"]))
        rows["time_complexity"][method] = TIME_COMPLEXITY.get(method, "-")
    return SummaryTable(methods=tuple(by_method), rows=rows, total_races=totals_by_method)
