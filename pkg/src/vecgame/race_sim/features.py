"""Flat per-race feature rows with Name_i_n_m_r column naming.

Cost columns are ``<Prog|Bound|Prox><i>_<n>_<m>_<r>`` (player i's cost
matrix entry (n, m) at round r); state columns are ``State<i>_<var>_<r>``
with vars x, y, v, phi (heading), beta (wheel slip), logged pre-decision.
Chosen actions and race outcomes ride along as target/meta columns.
"""

from __future__ import annotations

import csv
import re

from .race import RaceRecord

COST_NAMES = ("Prog", "Bound", "Prox")  # objective order: progress, bounds, proximity
STATE_VARS = ("x", "y", "v", "phi", "beta")

META_COLUMNS = (
    "race_id",
    "scenario",
    "method",
    "structure",
    "seed",
    "theta1_1",
    "theta1_2",
    "theta1_3",
    "theta2_1",
    "theta2_2",
    "theta2_3",
)
OUTCOME_COLUMNS = ("passed", "out_of_bounds", "collided", "min_distance", "lead_fraction")

_COST_RE = re.compile(r"^(Prog|Bound|Prox)([12])_(\d+)_(\d+)_(\d+)$")
_STATE_RE = re.compile(r"^State([12])_(x|y|v|phi|beta)_(\d+)$")
_ACTION_RE = re.compile(r"^Act([12])_(\d+)$")

HEADER_COMMENT = "# state columns are pre-decision; actions/costs are the same round's play"


def parse_column(name: str):
    """Parse a column name into its typed tuple; raises ValueError if malformed.

    Returns ("cost", cost_name, i, n, m, r), ("state", i, var, r),
    ("action", i, r) or ("meta", name).
    """
    m = _COST_RE.match(name)
    if m:
        return ("cost", m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4)), int(m.group(5)))
    m = _STATE_RE.match(name)
    if m:
        return ("state", int(m.group(1)), m.group(2), int(m.group(3)))
    m = _ACTION_RE.match(name)
    if m:
        return ("action", int(m.group(1)), int(m.group(2)))
    if name in META_COLUMNS or name in OUTCOME_COLUMNS:
        return ("meta", name)
    raise ValueError(f"unrecognized column name: {name!r}")


def feature_columns(rounds: int, n: int = 9, m: int = 9) -> list[str]:
    """Canonical column order for a feature table covering `rounds` rounds."""
    cols = list(META_COLUMNS) + list(OUTCOME_COLUMNS)
    for i in (1, 2):
        cols.extend(f"Act{i}_{r}" for r in range(1, rounds + 1))
    for i in (1, 2):
        for var in STATE_VARS:
            cols.extend(f"State{i}_{var}_{r}" for r in range(1, rounds + 1))
    for i in (1, 2):
        for name in COST_NAMES:
            for r in range(1, rounds + 1):
                for nn in range(1, n + 1):
                    cols.extend(f"{name}{i}_{nn}_{mm}_{r}" for mm in range(1, m + 1))
    return cols


def record_row(record: RaceRecord, race_id: str) -> dict:
    """One flat feature dict for a finished race."""
    cfg = record.config
    row = {
        "race_id": race_id,
        "scenario": cfg.scenario,
        "method": cfg.method,
        "structure": cfg.structure,
        "seed": cfg.seed,
        "theta1_1": cfg.theta1[0],
        "theta1_2": cfg.theta1[1],
        "theta1_3": cfg.theta1[2],
        "theta2_1": cfg.theta2[0],
        "theta2_2": cfg.theta2[1],
        "theta2_3": cfg.theta2[2],
        "passed": int(record.passed),
        "out_of_bounds": int(record.out_of_bounds),
        "collided": int(record.collided),
        "min_distance": record.min_distance,
        "lead_fraction": record.lead_fraction,
    }
    for rl in record.rounds:
        r = rl.round
        row[f"Act1_{r}"] = rl.row
        row[f"Act2_{r}"] = rl.col
        for i, state in ((1, rl.state1), (2, rl.state2)):
            row[f"State{i}_x_{r}"] = state.x
            row[f"State{i}_y_{r}"] = state.y
            row[f"State{i}_v_{r}"] = state.v
            row[f"State{i}_phi_{r}"] = state.heading
            row[f"State{i}_beta_{r}"] = state.slip
        for i, tensor in ((1, rl.C1), (2, rl.C2)):
            for h, name in enumerate(COST_NAMES):
                for nn in range(tensor.shape[1]):
                    for mm in range(tensor.shape[2]):
                        row[f"{name}{i}_{nn + 1}_{mm + 1}_{r}"] = tensor[h, nn, mm]
    return row


def write_feature_csv(path, records, race_ids=None, include_comment: bool = True) -> list[str]:
    """Write one row per race; returns the header that was used."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    rounds = max(len(rec.rounds) for rec in records)
    header = feature_columns(rounds)
    if race_ids is None:
        race_ids = [f"race_{k:04d}" for k in range(len(records))]
    with open(path, "w", newline="") as fh:
        if include_comment:
            fh.write(HEADER_COMMENT + "\n")
        writer = csv.DictWriter(fh, fieldnames=header, restval="")
        writer.writeheader()
        for rec, rid in zip(records, race_ids):
            writer.writerow(record_row(rec, rid))
    return header
