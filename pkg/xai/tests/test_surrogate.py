"""Surrogate fitting: planted signals, null controls, explicit errors."""

import numpy as np
import pytest

from vecgame_xai.frame import FeatureFrame, synthetic_frame
from vecgame_xai.surrogate import DegenerateTargetError, train_surrogate


def test_planted_signal_reaches_high_accuracy():
    frame = synthetic_frame(200, rounds=2, seed=1, n=3, m=3)
    frame.data["passed"] = (frame.data["State1_v_1"] > 0).astype(int)
    surrogate = train_surrogate(frame, "passed", seed=0)
    assert surrogate.task == "classification"
    assert surrogate.score >= 0.99


def test_shuffled_target_scores_near_chance():
    rng = np.random.default_rng(2)
    frame = synthetic_frame(300, rounds=2, seed=2, n=3, m=3)
    frame.data["passed"] = rng.integers(0, 2, len(frame))
    surrogate = train_surrogate(frame, "passed", seed=0)
    assert abs(surrogate.score - 0.5) < 0.2


def test_regression_target_uses_r2():
    frame = synthetic_frame(150, rounds=2, seed=3, n=3, m=3)
    frame.data["min_distance"] = 2.0 * frame.data["State2_x_1"] + 1.0
    surrogate = train_surrogate(frame, "min_distance", seed=0)
    assert surrogate.task == "regression"
    assert surrogate.score_name == "holdout_r2"
    assert surrogate.score > 0.9


def test_action_target_requires_round():
    frame = synthetic_frame(120, rounds=2, seed=4, n=3, m=3)
    with pytest.raises(ValueError, match="round"):
        train_surrogate(frame, "action")
    surrogate = train_surrogate(frame, "action", round_index=1)
    assert surrogate.target == "action"


def test_too_few_rows_rejected():
    frame = synthetic_frame(60, rounds=1, seed=5, n=3, m=3)
    with pytest.raises(ValueError, match="100 rows"):
        train_surrogate(frame, "passed")


def test_degenerate_target_is_explicit_error():
    frame = synthetic_frame(120, rounds=1, seed=6, n=3, m=3)
    frame.data["passed"] = 1
    with pytest.raises(DegenerateTargetError):
        train_surrogate(frame, "passed")


def test_targets_never_leak_into_features():
    frame = synthetic_frame(120, rounds=2, seed=7, n=3, m=3)
    names = frame.feature_names()
    assert "passed" not in names
    assert "min_distance" not in names
    assert not any(name.startswith("Act") for name in names)
    assert not any(name.startswith("theta") for name in names)


def test_variance_pruning_recorded():
    frame = synthetic_frame(120, rounds=1, seed=8, n=3, m=3)
    frame.data["State1_x_1"] = 5.0  # constant feature gets pruned
    _, kept = frame.feature_matrix()
    assert "State1_x_1" not in kept
    assert frame.pruning["kept_features"] == frame.pruning["total_features"] - 1
    assert "variance" in frame.pruning["rule"]
