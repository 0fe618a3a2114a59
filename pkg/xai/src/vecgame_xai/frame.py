"""Tabular race features with leakage-safe target selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .columns import ColumnInfo, validate_header

TARGETS = ("action", "passed", "out_of_bounds", "min_distance")


@dataclass
class FeatureFrame:
    """A validated feature table plus its parsed column metadata."""

    data: pd.DataFrame
    columns: dict[str, ColumnInfo]
    pruning: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path) -> "FeatureFrame":
        data = pd.read_csv(path, comment="#")
        columns = validate_header(data.columns)
        return cls(data=data, columns=columns)

    @classmethod
    def from_dataframe(cls, data: pd.DataFrame) -> "FeatureFrame":
        return cls(data=data, columns=validate_header(data.columns))

    def subset(self, mask) -> "FeatureFrame":
        return FeatureFrame(data=self.data.loc[mask].reset_index(drop=True), columns=self.columns)

    def feature_names(self) -> list[str]:
        return [name for name, info in self.columns.items() if info.is_feature]

    def target_vector(self, target: str, round_index: int | None = None) -> pd.Series:
        """Target values; the action target needs the round it was chosen in."""
        if target == "action":
            if round_index is None:
                raise ValueError("the action target requires a round index")
            name = f"Act1_{round_index}"
            if name not in self.data.columns:
                raise ValueError(f"no attacker action column for round {round_index}")
            return self.data[name]
        if target in ("passed", "out_of_bounds", "min_distance"):
            return self.data[target]
        raise ValueError(f"target must be one of {TARGETS}, got {target!r}")

    def feature_matrix(self, variance_threshold: float = 1e-12):
        """Numeric feature matrix with near-constant columns pruned.

        Target, action, and meta columns are excluded outright so targets
        never leak into the features. The pruning rule is recorded for the
        report.
        """
        names = self.feature_names()
        X = self.data[names].to_numpy(dtype=float)
        variances = X.var(axis=0)
        keep = variances > variance_threshold
        self.pruning = {
            "rule": f"drop features with variance <= {variance_threshold:g}",
            "total_features": len(names),
            "kept_features": int(keep.sum()),
        }
        kept_names = [n for n, k in zip(names, keep) if k]
        return X[:, keep], kept_names

    def __len__(self) -> int:
        return len(self.data)


def synthetic_frame(n_rows: int, rounds: int = 3, seed: int = 0, n: int = 9, m: int = 9) -> FeatureFrame:
    """Random frame with valid column names, for tests and planted signals."""
    rng = np.random.default_rng(seed)
    cols = {}
    cols["race_id"] = [f"race_{k:04d}" for k in range(n_rows)]
    cols["scenario"] = ["close_tail"] * n_rows
    cols["method"] = ["scalar"] * n_rows
    cols["structure"] = ["rbf"] * n_rows
    cols["seed"] = np.zeros(n_rows, dtype=int)
    for i in (1, 2, 3):
        cols[f"theta1_{i}"] = rng.uniform(0, 1, n_rows)
        cols[f"theta2_{i}"] = np.ones(n_rows)
    cols["passed"] = rng.integers(0, 2, n_rows)
    cols["out_of_bounds"] = rng.integers(0, 2, n_rows)
    cols["collided"] = np.zeros(n_rows, dtype=int)
    cols["min_distance"] = rng.uniform(1, 8, n_rows)
    cols["lead_fraction"] = rng.uniform(0, 1, n_rows)
    for i in (1, 2):
        for r in range(1, rounds + 1):
            cols[f"Act{i}_{r}"] = rng.integers(1, 10, n_rows)
    for i in (1, 2):
        for var in ("x", "y", "v", "phi", "beta"):
            for r in range(1, rounds + 1):
                cols[f"State{i}_{var}_{r}"] = rng.normal(size=n_rows)
    for i in (1, 2):
        for name in ("Prog", "Bound", "Prox"):
            for r in range(1, rounds + 1):
                for nn in range(1, n + 1):
                    for mm in range(1, m + 1):
                        cols[f"{name}{i}_{nn}_{mm}_{r}"] = rng.normal(size=n_rows)
    return FeatureFrame.from_dataframe(pd.DataFrame(cols))
