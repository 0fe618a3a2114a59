"""Pure bimatrix-game mathematics over vector costs.

A player's multi-objective cost is a stack of g cost matrices, all n x m,
ordered by priority (index 0 of the stack = highest priority objective).
Policies are 1-based indices everywhere in this module: row policies index
player 1's actions, column policies player 2's. All functions are pure and
never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

__all__ = [
    "PolicySet",
    "is_nash",
    "moderate_set",
    "pareto_set",
    "scalarize",
    "security_policy_col",
    "security_policy_row",
    "worst_set",
]


def as_cost_matrix(entries) -> np.ndarray:
    """Validate and return a single cost matrix as a float ndarray."""
    mat = np.asarray(entries, dtype=float)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise DimensionError(f"cost matrix must be 2-D and nonempty, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("cost matrix entries must all be finite")
    return mat


def as_cost_tensor(objectives) -> np.ndarray:
    """Validate a g-deep stack of equally shaped cost matrices, shape (g, n, m)."""
    tensor = np.asarray(objectives, dtype=float)
    if tensor.ndim != 3 or tensor.shape[0] < 1:
        raise DimensionError(f"cost tensor must have shape (g, n, m), got {tensor.shape}")
    if tensor.shape[1] < 1 or tensor.shape[2] < 1:
        raise DimensionError(f"cost tensor matrices must be nonempty, got {tensor.shape}")
    if not np.all(np.isfinite(tensor)):
        raise ValueError("cost tensor entries must all be finite")
    return tensor


@dataclass(frozen=True)
class PolicySet:
    """A set of row policies (1-based) of one kind: pareto, worst or moderate."""

    members: frozenset[int]
    kind: str

    def __contains__(self, row: int) -> bool:
        return row in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def scalarize(costs, weights) -> np.ndarray:
    """Weighted sum of the objective matrices: sum_h w[h] * C[h], elementwise."""
    tensor = as_cost_tensor(costs)
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != tensor.shape[0]:
        raise DimensionError(
            f"weight vector length {w.shape} does not match {tensor.shape[0]} objectives"
        )
    if np.any(w < 0) or not np.any(w > 0):
        raise ValueError("weights must be nonnegative and not all zero")
    return np.tensordot(w, tensor, axes=1)


def security_policy_row(D) -> tuple[int, float]:
    """Min-max row policy: argmin over rows of the row-wise max, 1-based.

    Ties break to the lowest index.
    """
    mat = as_cost_matrix(D)
    row_maxes = mat.max(axis=1)
    idx = int(np.argmin(row_maxes))
    return idx + 1, float(row_maxes[idx])


def security_policy_col(D) -> tuple[int, float]:
    """Min-max column policy: argmin over columns of the column-wise max, 1-based."""
    mat = as_cost_matrix(D)
    col_maxes = mat.max(axis=0)
    idx = int(np.argmin(col_maxes))
    return idx + 1, float(col_maxes[idx])


def _column_outcomes(costs, sigma: int) -> np.ndarray:
    """Outcome vectors J(row) for a fixed column policy, shape (n, g)."""
    tensor = as_cost_tensor(costs)
    if not 1 <= sigma <= tensor.shape[2]:
        raise DimensionError(f"column policy {sigma} out of range 1..{tensor.shape[2]}")
    return tensor[:, :, sigma - 1].T  # (n, g)


def pareto_set(costs, sigma: int) -> PolicySet:
    """Rows whose outcome vectors are non-dominated at the fixed column sigma.

    Row b dominates row a when it is no worse in every objective and strictly
    better in at least one.
    """
    J = _column_outcomes(costs, sigma)
    n = J.shape[0]
    members = set()
    for a in range(n):
        dominated = False
        for b in range(n):
            if b == a:
                continue
            if np.all(J[b] <= J[a]) and np.any(J[b] < J[a]):
                dominated = True
                break
        if not dominated:
            members.add(a + 1)
    return PolicySet(frozenset(members), "pareto")


def worst_set(costs, sigma: int, tie_tol: float = 0.0, tie_frac=0.0) -> PolicySet:
    """Union over objectives of all rows attaining that objective's maximum.

    The tie band widens the maximizers: rows within ``tie_tol`` (absolute)
    or ``tie_frac`` of the objective's outcome range of the maximum all
    count as worst-case; ``tie_frac`` may be one fraction per objective. With an objective that is flat over the candidates
    every row is then worst-case, which empties the moderate set and
    disables cost adjustment in featureless regions; near a sharp feature
    the whole near-worst cluster is excluded rather than only its peak.
    Defaults reproduce exact argmax ties.
    """
    J = _column_outcomes(costs, sigma)
    g = J.shape[1]
    fracs = np.broadcast_to(np.asarray(tie_frac, dtype=float), (g,))
    members = set()
    for h in range(g):
        col = J[:, h]
        band = max(tie_tol, float(fracs[h]) * float(col.max() - col.min()))
        members.update(int(i) + 1 for i in np.flatnonzero(col >= col.max() - band))
    return PolicySet(frozenset(members), "worst")


def moderate_set(costs, sigma: int, tie_tol: float = 0.0, tie_frac=0.0) -> PolicySet:
    """Pareto-optimal rows that are not worst-case for any objective."""
    members = (
        pareto_set(costs, sigma).members
        - worst_set(costs, sigma, tie_tol=tie_tol, tie_frac=tie_frac).members
    )
    return PolicySet(frozenset(members), "moderate")


def is_nash(D1, D2, policies: tuple[int, int]) -> bool:
    """True iff neither player can improve by unilaterally deviating.

    ``policies`` is a 1-based (row, col) pair. Comparisons are exact.
    """
    A = as_cost_matrix(D1)
    B = as_cost_matrix(D2)
    if A.shape != B.shape:
        raise DimensionError(f"cost matrices differ in shape: {A.shape} vs {B.shape}")
    r, c = policies
    if not (1 <= r <= A.shape[0] and 1 <= c <= A.shape[1]):
        raise DimensionError(f"policy pair {policies} out of range for shape {A.shape}")
    i, j = r - 1, c - 1
    return bool(np.all(A[i, j] <= A[:, j]) and np.all(B[i, j] <= B[i, :]))
