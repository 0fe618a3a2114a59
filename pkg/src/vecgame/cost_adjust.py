"""Cost adjustment for the vector-cost method.

Finds a minimal-Frobenius-norm adjustment E to player 1's prime-objective
matrix so that (C11 + E, D2) is an exact potential game whose potential has
its designated unique global minimum at a chosen cell (r, c). The potential
constraints pin most of the structure, so the optimization reduces to a
small bound-constrained least-squares problem:

  * row differences of the potential must equal row differences of D2, so
    within each row the potential is D2's row shifted to a per-row offset
    k_row (k at the target row is 0);
  * column differences of C11 + E must equal column differences of the
    potential, so E is the potential minus C11 plus a free per-column
    offset b_col.

The strict-positivity requirement on the potential away from (r, c) is
imposed as >= eps and becomes lower bounds on the k offsets, except in the
target row where it involves no free variables at all: D2's row r must
already dip at column c by at least eps. That no-variable condition is the
cheap feasibility screen run before any solve.

The reduced system uses only per-row/per-column offsets, so the full
pairwise-difference constraint set is re-verified post hoc from the dense
matrices before a solution is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import lsq_linear

from .errors import DimensionError
from .game_core import (
    as_cost_matrix,
    as_cost_tensor,
    moderate_set,
    scalarize,
    security_policy_col,
    security_policy_row,
)

__all__ = [
    "DEFAULT_EPS",
    "PairwiseDiffs",
    "PotentialSolution",
    "SelectionResult",
    "check_feasibility",
    "pairwise_diffs",
    "select_policy",
    "solve_adjustment",
    "verify_solution",
]

# Minimum potential-gap margin standing in for strict positivity.
DEFAULT_EPS = 1e-3

# Contract tolerances for accepted solutions.
RESIDUAL_TOL = 1e-6
ZERO_TOL = 1e-8

_MAX_ITER = 10_000


@dataclass(frozen=True)
class PairwiseDiffs:
    """Every pairwise difference along columns and rows of one matrix.

    col_diffs[t, j] = X[i, j] - X[k, j] for the t-th row pair (i, k), i < k.
    row_diffs[i, s] = X[i, j] - X[i, k] for the s-th column pair (j, k), j < k.
    Pair indices are 1-based to match policy indexing.
    """

    col_diffs: np.ndarray
    row_diffs: np.ndarray
    row_pairs: tuple[tuple[int, int], ...]
    col_pairs: tuple[tuple[int, int], ...]


def pairwise_diffs(X) -> PairwiseDiffs:
    """All pairwise column and row differences of a matrix."""
    mat = as_cost_matrix(X)
    n, m = mat.shape
    row_pairs = tuple((i + 1, k + 1) for i, k in combinations(range(n), 2))
    col_pairs = tuple((j + 1, k + 1) for j, k in combinations(range(m), 2))
    col_diffs = np.empty((len(row_pairs), m))
    for t, (i, k) in enumerate(row_pairs):
        col_diffs[t] = mat[i - 1] - mat[k - 1]
    row_diffs = np.empty((n, len(col_pairs)))
    for s, (j, k) in enumerate(col_pairs):
        row_diffs[:, s] = mat[:, j - 1] - mat[:, k - 1]
    return PairwiseDiffs(col_diffs, row_diffs, row_pairs, col_pairs)


@dataclass(frozen=True)
class PotentialSolution:
    """Adjustment matrix plus the potential that certifies it.

    ``minimum`` is the 1-based (row, col) cell where the potential is pinned
    to zero; everywhere else it is at least ``eps``. ``objective_value`` is
    the squared Frobenius norm of the adjustment.
    """

    adjustment: np.ndarray
    potential: np.ndarray
    minimum: tuple[int, int]
    objective_value: float
    eps: float
    kkt_residual: float
    constraint_residual: float
    converged: bool


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of the policy-selection loop."""

    row_policy: int
    col_policy: int
    method: str  # "adjusted" or "scalar_fallback"
    solution: PotentialSolution | None
    candidates_tried: int


def check_feasibility(D2, r: int, c: int, margin: float = DEFAULT_EPS) -> bool:
    """Screen for a solvable adjustment targeting minimum cell (r, c).

    D2's entry (r, c) must be the strict minimum of row r; with the default
    margin it must undercut the rest of the row by the same eps the solver
    enforces on the potential, making the screen exactly equivalent to
    solver feasibility.
    """
    mat = as_cost_matrix(D2)
    n, m = mat.shape
    if not (1 <= r <= n and 1 <= c <= m):
        raise DimensionError(f"target cell {(r, c)} out of range for shape {mat.shape}")
    row = mat[r - 1]
    others = np.delete(row, c - 1)
    if others.size == 0:
        return True
    return bool(np.min(others) - row[c - 1] >= margin)


def _constraint_residual(C11, D2, E, phi) -> float:
    """Max violation over the full pairwise-difference constraint set."""
    adjusted = pairwise_diffs(np.asarray(C11) + E)
    target = pairwise_diffs(phi)
    fixed = pairwise_diffs(D2)
    col_resid = np.max(np.abs(adjusted.col_diffs - target.col_diffs)) if target.col_diffs.size else 0.0
    row_resid = np.max(np.abs(fixed.row_diffs - target.row_diffs)) if target.row_diffs.size else 0.0
    return float(max(col_resid, row_resid))


def solve_adjustment(C11, D2, r: int, c: int, eps: float = DEFAULT_EPS) -> PotentialSolution | None:
    """Minimum-norm adjustment E and potential phi with phi(r, c) = 0.

    Returns None when no finite adjustment exists for this target cell, or
    when the solver fails to converge within its iteration cap.
    """
    A = as_cost_matrix(C11)
    B = as_cost_matrix(D2)
    if A.shape != B.shape:
        raise DimensionError(f"cost matrices differ in shape: {A.shape} vs {B.shape}")
    n, m = A.shape
    if not check_feasibility(B, r, c, margin=eps):
        return None

    ri, ci = r - 1, c - 1
    # Potential rows follow D2's rows up to one offset each; row r has offset 0.
    base = B - B[:, ci:ci + 1]  # base[g, s] = D2[g, s] - D2[g, c]
    resid0 = base - A  # E with all offsets at zero

    other_rows = [g for g in range(n) if g != ri]
    n_k = len(other_rows)
    n_vars = n_k + m
    M = np.zeros((n * m, n_vars))
    cells = [(g, s) for g in range(n) for s in range(m)]
    k_index = {g: idx for idx, g in enumerate(other_rows)}
    for row_idx, (g, s) in enumerate(cells):
        if g != ri:
            M[row_idx, k_index[g]] = 1.0
        M[row_idx, n_k + s] = 1.0
    a = np.array([resid0[g, s] for g, s in cells])

    lb = np.full(n_vars, -np.inf)
    ub = np.full(n_vars, np.inf)
    for g in other_rows:
        # k_g + min_s base[g, s] >= eps keeps the whole row above the margin.
        lb[k_index[g]] = eps - float(np.min(base[g]))

    if n_vars == 0:
        z = np.zeros(0)
        converged = True
    else:
        result = lsq_linear(
            M, -a, bounds=(lb, ub), method="bvls", max_iter=_MAX_ITER, tol=1e-14
        )
        z = result.x
        converged = result.status > 0
    if not converged:
        return None

    k = np.zeros(n)
    for g in other_rows:
        k[g] = z[k_index[g]]
    b = z[n_k:]

    phi = base + k[:, None]
    E = phi - A + b[None, :]

    grad = M.T @ (M @ z + a) if n_vars else np.zeros(0)
    kkt = 0.0
    for idx in range(n_vars):
        if np.isfinite(lb[idx]) and z[idx] <= lb[idx] + 1e-12:
            kkt = max(kkt, max(0.0, -float(grad[idx])))
        else:
            kkt = max(kkt, abs(float(grad[idx])))

    return PotentialSolution(
        adjustment=E,
        potential=phi,
        minimum=(r, c),
        objective_value=float(np.sum(E * E)),
        eps=eps,
        kkt_residual=float(kkt),
        constraint_residual=_constraint_residual(A, B, E, phi),
        converged=converged,
    )


def verify_solution(
    C11,
    D2,
    sol: PotentialSolution,
    resid_tol: float = RESIDUAL_TOL,
    zero_tol: float = ZERO_TOL,
) -> bool:
    """Accept a solution only if it certifies the designed equilibrium.

    Checks, in order: the full pairwise potential constraints hold within
    tolerance; the potential is zero at the target and strictly positive
    (>= eps, within tolerance) everywhere else, making the target its unique
    global minimum; and the security row of the adjusted matrix equals the
    target row. The last check guards against numerically aberrant adjusted
    costs whose min-max row drifts off the designed minimum.
    """
    A = as_cost_matrix(C11)
    B = as_cost_matrix(D2)
    phi = sol.potential
    r, c = sol.minimum
    if phi.shape != A.shape or A.shape != B.shape:
        raise DimensionError("solution/potential shapes inconsistent with inputs")
    if _constraint_residual(A, B, sol.adjustment, phi) > resid_tol:
        return False
    if abs(phi[r - 1, c - 1]) > zero_tol:
        return False
    others = phi.copy()
    others[r - 1, c - 1] = np.inf
    if np.min(others) < sol.eps - zero_tol:
        return False
    return security_policy_row(A + sol.adjustment)[0] == r


def select_policy(
    C1, D2, theta1, eps: float = DEFAULT_EPS, tie_tol: float = 0.0, tie_frac=0.0, log=None
) -> SelectionResult:
    """Policy selection from adjusted costs, with scalarization fallback.

    Fixes player 2's security column, then tries every moderate Pareto row
    as the designated potential minimum, keeping the verified solution with
    the smallest squared adjustment norm (first found wins ties). When no
    candidate survives, reverts to the security row of the scalarized costs.
    ``tie_tol`` is forwarded to the moderate-set computation so that
    near-flat objectives disable adjustment. ``log``, when given, receives
    one JSON-serializable dict per candidate.
    """
    tensor = as_cost_tensor(C1)
    B = as_cost_matrix(D2)
    if tensor.shape[1:] != B.shape:
        raise DimensionError(f"cost tensor {tensor.shape} does not match D2 {B.shape}")
    theta = np.asarray(theta1, dtype=float)
    if theta.shape != (tensor.shape[0],):
        raise DimensionError("theta1 length must equal the number of objectives")

    sigma = security_policy_col(B)[0]
    C11 = tensor[0]
    best: PotentialSolution | None = None
    tried = 0
    for r in moderate_set(tensor, sigma, tie_tol=tie_tol, tie_frac=tie_frac):
        tried += 1
        entry = {"candidate_row": r, "sigma": sigma}
        if not check_feasibility(B, r, sigma, margin=eps):
            entry["verdict"] = "infeasible"
            if log:
                log(entry)
            continue
        sol = solve_adjustment(C11, B, r, sigma, eps=eps)
        if sol is None:
            entry["verdict"] = "no_convergence"
            if log:
                log(entry)
            continue
        ok = verify_solution(C11, B, sol)
        entry.update(
            verdict="verified" if ok else "rejected",
            objective_value=sol.objective_value,
            kkt_residual=sol.kkt_residual,
            constraint_residual=sol.constraint_residual,
            adjustment=sol.adjustment.tolist(),
            potential=sol.potential.tolist(),
        )
        if log:
            log(entry)
        if ok and (best is None or sol.objective_value < best.objective_value):
            best = sol

    if best is not None:
        row = security_policy_row(C11 + best.adjustment)[0]
        return SelectionResult(row, sigma, "adjusted", best, tried)
    row = security_policy_row(scalarize(tensor, theta))[0]
    return SelectionResult(row, sigma, "scalar_fallback", None, tried)
