"""Additive feature attributions and entropy summaries.

The exact method decomposes each tree's prediction along the sample's
decision path: every split contributes the change in the node's expected
value to the split feature, so contributions sum to prediction minus the
root expectation. The sampling alternative is permutation importance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from sklearn.inspection import permutation_importance

from .frame import FeatureFrame
from .surrogate import SurrogateModel


def shannon_entropy(values) -> float:
    """Entropy (nats) of the normalized nonnegative vector; zero-total -> 0."""
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise ValueError("importance values must be nonnegative")
    total = v.sum()
    if total == 0:
        return 0.0
    p = v[v > 0] / total
    return float(-(p * np.log(p)).sum())


def _node_values(tree) -> np.ndarray:
    """Per-node expected value, shape (nodes, n_out); class counts normalized."""
    raw = tree.value[:, 0, :].astype(float)
    if raw.shape[1] > 1:
        sums = raw.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        raw = raw / sums
    return raw


def tree_path_attributions(model, X: np.ndarray) -> np.ndarray:
    """Mean-absolute additive attributions, shape (n_features,).

    Per sample and per output dimension, a feature's attribution is the sum
    of expected-value changes over the decision-path splits on that feature,
    averaged over the ensemble; the result is |attribution| averaged over
    samples and outputs.
    """
    n_samples, n_features = X.shape
    estimators = getattr(model, "estimators_", [model])
    abs_total = np.zeros((n_samples, n_features))
    n_out = None
    for est in estimators:
        tree = est.tree_
        values = _node_values(tree)  # (nodes, n_out)
        n_out = values.shape[1]
        parent = np.full(tree.node_count, -1)
        edge_feature = np.full(tree.node_count, -1)
        for node in range(tree.node_count):
            for child in (tree.children_left[node], tree.children_right[node]):
                if child != -1:
                    parent[child] = node
                    edge_feature[child] = tree.feature[node]
        paths = est.decision_path(X)  # csr (samples, nodes)
        non_root = np.flatnonzero(parent >= 0)
        if non_root.size == 0:
            continue
        delta = values[non_root] - values[parent[non_root]]  # (edges, n_out)
        contrib = np.zeros((n_samples, n_features, n_out))
        for c in range(n_out):
            scatter = csr_matrix(
                (delta[:, c], (non_root, edge_feature[non_root])),
                shape=(tree.node_count, n_features),
            )
            contrib[:, :, c] = (paths @ scatter).toarray()
        abs_total += np.abs(contrib).mean(axis=2)
    return abs_total.mean(axis=0) / len(estimators)


@dataclass
class ImportanceReport:
    target: str
    method: str
    importances: dict[str, float]
    entropy: float
    top: list[tuple[str, float]]
    score_name: str
    score: float
    pruning: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "method": self.method,
            "entropy_nats": self.entropy,
            "top": [[name, value] for name, value in self.top],
            self.score_name: self.score,
            "pruning": self.pruning,
            "importances": self.importances,
        }


def importance_report(
    surrogate: SurrogateModel,
    frame: FeatureFrame,
    method: str = "path",
    round_index: int | None = None,
    top_k: int = 25,
    seed: int = 0,
) -> ImportanceReport:
    """Mean-absolute attributions plus the entropy of their distribution."""
    X = frame.data[surrogate.feature_names].to_numpy(dtype=float)
    if method == "path":
        raw = tree_path_attributions(surrogate.model, X)
    elif method == "permutation":
        y = frame.target_vector(surrogate.target, round_index).to_numpy()
        result = permutation_importance(
            surrogate.model, X, y, n_repeats=5, random_state=seed, n_jobs=-1
        )
        raw = np.abs(result.importances_mean)
    else:
        raise ValueError("method must be 'path' or 'permutation'")

    importances = {name: float(v) for name, v in zip(surrogate.feature_names, raw)}
    order = sorted(importances.items(), key=lambda kv: (-kv[1], kv[0]))
    return ImportanceReport(
        target=surrogate.target,
        method=method,
        importances=importances,
        entropy=shannon_entropy(raw),
        top=order[:top_k],
        score_name=surrogate.score_name,
        score=surrogate.score,
        pruning=surrogate.pruning,
    )


def mean_report(reports: list[ImportanceReport]) -> ImportanceReport:
    """Average importances over several reports (e.g. per-round action targets)."""
    if not reports:
        raise ValueError("no reports to average")
    names = sorted({name for rep in reports for name in rep.importances})
    merged = {
        name: float(np.mean([rep.importances.get(name, 0.0) for rep in reports]))
        for name in names
    }
    order = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))
    first = reports[0]
    return ImportanceReport(
        target=first.target,
        method=first.method,
        importances=merged,
        entropy=shannon_entropy(list(merged.values())),
        top=order[: len(first.top)],
        score_name="mean_" + first.score_name,
        score=float(np.mean([rep.score for rep in reports])),
        pruning=first.pruning,
    )
