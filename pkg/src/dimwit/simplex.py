"""Dense two-phase simplex solver for small linear programs.

Solves

    minimize    c . v
    subject to  a_eq v  = b_eq
                a_ub v <= b_ub
                v >= 0

with a plain dense tableau. Phase one minimizes the sum of artificial
variables to find a basic feasible point (or certify infeasibility), phase
two optimizes the requested objective. Pivot selection follows Bland's
rule throughout: the entering column is the lowest-index column with a
reduced cost below -1e-9, and ratio-test ties are broken by the lowest
basic-variable index. This guarantees termination and makes the pivot
sequence, and therefore the returned vertex, fully deterministic.

The problems this package generates have at most a few thousand variables
and a dozen rows, so no sparsity or scaling machinery is used. The pivot
budget defaults to 10^6 and can be overridden with the DIMWIT_LP_MAX_PIVOTS
environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, InvalidConfig, IterationLimit, SolverFailure

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-8
RESIDUAL_TOL = 1e-8
COMPLEMENTARITY_TOL = 1e-6
DEFAULT_MAX_PIVOTS = 10**6
ENV_MAX_PIVOTS = "DIMWIT_LP_MAX_PIVOTS"


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _as_matrix(block, n: int, name: str) -> np.ndarray:
    if block is None:
        return np.zeros((0, n))
    arr = np.asarray(block, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != n:
        raise DimensionMismatch(f"{name} must be a matrix with {n} columns, got shape {arr.shape}")
    return arr


def _as_vector(block, m: int, name: str) -> np.ndarray:
    if block is None:
        arr = np.zeros(0)
    else:
        arr = np.asarray(block, dtype=float).reshape(-1)
    if arr.size != m:
        raise DimensionMismatch(f"{name} must have {m} entries, got {arr.size}")
    return arr


@dataclass(frozen=True)
class LinearProgram:
    """Minimize c . v over v >= 0 with equality and upper-bound rows."""

    c: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float).reshape(-1)
        if c.size == 0:
            raise DimensionMismatch("objective vector must not be empty")
        a_eq = _as_matrix(self.a_eq, c.size, "a_eq")
        a_ub = _as_matrix(self.a_ub, c.size, "a_ub")
        b_eq = _as_vector(self.b_eq, a_eq.shape[0], "b_eq")
        b_ub = _as_vector(self.b_ub, a_ub.shape[0], "b_ub")
        for name, arr in (("c", c), ("a_eq", a_eq), ("b_eq", b_eq), ("a_ub", a_ub), ("b_ub", b_ub)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise DimensionMismatch(f"{name} contains non-finite entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", b_eq)
        object.__setattr__(self, "a_ub", a_ub)
        object.__setattr__(self, "b_ub", b_ub)

    @property
    def n_vars(self) -> int:
        return self.c.size


@dataclass(frozen=True)
class LPOutcome:
    """Solver result.

    For OPTIMAL, solution holds the minimizer and value the objective.
    For INFEASIBLE, value holds the residual infeasibility measure from
    phase one (the minimum total artificial mass) and solution is empty.
    For UNBOUNDED, value is -inf and solution is empty.
    """

    status: LPStatus
    value: float
    solution: np.ndarray
    iterations: int


def _pivot_budget(max_pivots: int | None) -> int:
    if max_pivots is not None:
        budget = max_pivots
    else:
        raw = os.environ.get(ENV_MAX_PIVOTS)
        if raw is None:
            return DEFAULT_MAX_PIVOTS
        try:
            budget = int(raw)
        except ValueError as exc:
            raise InvalidConfig(f"{ENV_MAX_PIVOTS} must be an integer, got {raw!r}") from exc
    if budget < 1:
        raise InvalidConfig(f"pivot budget must be positive, got {budget}")
    return budget


class _Tableau:
    """Mutable simplex tableau; the last column is the right-hand side."""

    def __init__(self, rows: np.ndarray, rhs: np.ndarray, basis: np.ndarray, budget: int):
        self.t = np.column_stack([rows, rhs])
        self.basis = basis
        self.budget = budget
        self.iterations = 0

    def pivot(self, row: int, col: int) -> None:
        self.iterations += 1
        if self.iterations > self.budget:
            raise IterationLimit(f"exceeded pivot budget of {self.budget}")
        t = self.t
        t[row] = t[row] / t[row, col]
        factors = t[:, col].copy()
        factors[row] = 0.0
        t -= np.outer(factors, t[row])
        # Re-zero the pivot column exactly to keep later scans clean.
        t[:, col] = 0.0
        t[row, col] = 1.0
        self.basis[row] = col

    def run(self, z: np.ndarray, n_cols: int) -> str:
        """Minimize with reduced-cost row z over the first n_cols columns."""
        t = self.t
        while True:
            candidates = np.flatnonzero(z[:n_cols] < -PIVOT_TOL)
            if candidates.size == 0:
                return "optimal"
            col = int(candidates[0])
            positive = np.flatnonzero(t[:, col] > PIVOT_TOL)
            if positive.size == 0:
                return "unbounded"
            ratios = t[positive, -1] / t[positive, col]
            best = ratios.min()
            ties = positive[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            row = int(ties[np.argmin(self.basis[ties])])
            pivot_col_cost = z[col]
            self.pivot(row, col)
            z -= pivot_col_cost * t[row]


def solve(lp: LinearProgram, *, max_pivots: int | None = None) -> LPOutcome:
    """Solve the linear program with a deterministic two-phase simplex.

    Raises DimensionMismatch for malformed inputs, IterationLimit when the
    pivot budget is exhausted, and SolverFailure if the final vertex fails
    its feasibility or complementary-slackness verification.
    """
    budget = _pivot_budget(max_pivots)
    n = lp.n_vars
    m_ub = lp.a_ub.shape[0]
    m_eq = lp.a_eq.shape[0]
    m = m_ub + m_eq
    n_cols = n + m_ub

    rows = np.zeros((m, n_cols))
    rhs = np.concatenate([lp.b_ub, lp.b_eq])
    if m_ub:
        rows[:m_ub, :n] = lp.a_ub
        rows[np.arange(m_ub), n + np.arange(m_ub)] = 1.0
    if m_eq:
        rows[m_ub:, :n] = lp.a_eq
    negated = rhs < 0.0
    rows[negated] *= -1.0
    rhs = np.abs(rhs)

    # Slacks of non-negated upper-bound rows start basic; every other row
    # gets an artificial variable.
    needs_artificial = np.ones(m, dtype=bool)
    needs_artificial[:m_ub] = negated[:m_ub]
    art_rows = np.flatnonzero(needs_artificial)
    n_art = art_rows.size
    full = np.zeros((m, n_cols + n_art))
    full[:, :n_cols] = rows
    basis = np.zeros(m, dtype=int)
    for k, i in enumerate(art_rows):
        full[i, n_cols + k] = 1.0
        basis[i] = n_cols + k
    plain = np.flatnonzero(~needs_artificial)
    basis[plain] = n + plain

    tableau = _Tableau(full, rhs, basis, budget)

    # Phase one: minimize the total artificial mass.
    if n_art:
        z1 = np.zeros(n_cols + n_art + 1)
        z1[n_cols:-1] = 1.0
        for i in art_rows:
            z1 -= tableau.t[i]
        status = tableau.run(z1, n_cols + n_art)
        if status != "optimal":
            raise SolverFailure("phase one cannot be unbounded; tableau is corrupt")
        infeasibility = -z1[-1]
        if infeasibility > FEAS_TOL:
            return LPOutcome(LPStatus.INFEASIBLE, float(infeasibility), np.zeros(0), tableau.iterations)
        # Drive leftover artificials out of the basis; rows that cannot
        # pivot are redundant constraints and are dropped.
        drop: list[int] = []
        for i in range(m):
            if tableau.basis[i] >= n_cols:
                entries = np.flatnonzero(np.abs(tableau.t[i, :n_cols]) > PIVOT_TOL)
                if entries.size:
                    tableau.pivot(i, int(entries[0]))
                else:
                    drop.append(i)
        if drop:
            keep = np.setdiff1d(np.arange(m), np.array(drop))
            tableau.t = tableau.t[keep]
            tableau.basis = tableau.basis[keep]
            rows = rows[keep]
            rhs = rhs[keep]
    # Remove artificial columns entirely.
    tableau.t = np.delete(tableau.t, np.s_[n_cols : n_cols + n_art], axis=1)

    # Phase two: price out the requested objective and optimize.
    c_full = np.concatenate([lp.c, np.zeros(m_ub)])
    z2 = np.concatenate([c_full, [0.0]])
    for i in range(tableau.t.shape[0]):
        cb = c_full[tableau.basis[i]]
        if cb != 0.0:
            z2 -= cb * tableau.t[i]
    status = tableau.run(z2, n_cols)
    if status == "unbounded":
        return LPOutcome(LPStatus.UNBOUNDED, float("-inf"), np.zeros(0), tableau.iterations)

    v_full = np.zeros(n_cols)
    v_full[tableau.basis] = tableau.t[:, -1]
    solution = v_full[:n].copy()
    value = float(lp.c @ solution)
    _verify_vertex(lp, rows, rhs, c_full, tableau.basis, v_full, solution)
    return LPOutcome(LPStatus.OPTIMAL, value, solution, tableau.iterations)


def _verify_vertex(
    lp: LinearProgram,
    rows: np.ndarray,
    rhs: np.ndarray,
    c_full: np.ndarray,
    basis: np.ndarray,
    v_full: np.ndarray,
    solution: np.ndarray,
) -> None:
    """Check primal feasibility and complementary slackness of the vertex."""
    if v_full.size and v_full.min() < -1e-10:
        raise SolverFailure(f"vertex has negative component {v_full.min()}")
    if lp.a_eq.shape[0]:
        res_eq = np.max(np.abs(lp.a_eq @ solution - lp.b_eq))
        if res_eq > RESIDUAL_TOL:
            raise SolverFailure(f"equality residual {res_eq} exceeds {RESIDUAL_TOL}")
    if lp.a_ub.shape[0]:
        res_ub = np.max(lp.a_ub @ solution - lp.b_ub)
        if res_ub > RESIDUAL_TOL:
            raise SolverFailure(f"inequality residual {res_ub} exceeds {RESIDUAL_TOL}")
    if rows.shape[0] == 0:
        return
    try:
        duals = np.linalg.solve(rows[:, basis].T, c_full[basis])
    except np.linalg.LinAlgError as exc:
        raise SolverFailure("basis matrix is singular") from exc
    reduced = c_full - rows.T @ duals
    worst = np.max(np.abs(v_full * reduced))
    if worst > COMPLEMENTARITY_TOL:
        raise SolverFailure(f"complementary slackness violated by {worst}")
    if reduced.min() < -COMPLEMENTARITY_TOL:
        raise SolverFailure(f"dual infeasibility {reduced.min()} at claimed optimum")
