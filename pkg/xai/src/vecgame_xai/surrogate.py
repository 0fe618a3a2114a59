"""Tree-ensemble surrogates approximating race input/output relationships."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier, RandomForestRegressor
from sklearn.model_selection import train_test_split

from .frame import FeatureFrame

MIN_ROWS = 100


class DegenerateTargetError(ValueError):
    """The target takes a single value; nothing to model."""


@dataclass
class SurrogateModel:
    model: object
    feature_names: list[str]
    target: str
    task: str  # "classification" | "regression"
    score_name: str
    score: float
    pruning: dict


def train_surrogate(
    frame: FeatureFrame,
    target: str,
    round_index: int | None = None,
    seed: int = 0,
    n_estimators: int = 200,
    test_size: float = 0.25,
    variance_threshold: float = 1e-12,
) -> SurrogateModel:
    """Fit a random-forest surrogate and report holdout quality."""
    if len(frame) < MIN_ROWS:
        raise ValueError(f"need at least {MIN_ROWS} rows to fit a surrogate, got {len(frame)}")
    y = frame.target_vector(target, round_index).to_numpy()
    X, names = frame.feature_matrix(variance_threshold)

    task = "regression" if target == "min_distance" else "classification"
    if task == "classification" and np.unique(y).size < 2:
        raise DegenerateTargetError(f"target {target!r} has a single class")
    if task == "regression" and np.ptp(y) == 0:
        raise DegenerateTargetError(f"target {target!r} is constant")

    stratify = y if task == "classification" and np.min(np.bincount(y.astype(int))) >= 2 else None
    X_tr, X_te, y_tr, y_te = train_test_split(
        X, y, test_size=test_size, random_state=seed, stratify=stratify
    )
    if task == "classification":
        model = RandomForestClassifier(n_estimators=n_estimators, random_state=seed, n_jobs=-1)
        score_name = "holdout_accuracy"
    else:
        model = RandomForestRegressor(n_estimators=n_estimators, random_state=seed, n_jobs=-1)
        score_name = "holdout_r2"
    model.fit(X_tr, y_tr)
    score = float(model.score(X_te, y_te))
    return SurrogateModel(
        model=model, feature_names=names, target=target, task=task,
        score_name=score_name, score=score, pruning=dict(frame.pruning),
    )
