"""Dimension witnesses and retrocausality quantification.

Two witnesses certify that a two-outcome behavior cannot come from a
classical variable of dimension k:

* the determinant witness builds the k x k matrix
  W[i, j] = p(d=0|x=2j, y=i) - p(d=0|x=2j+1, y=i) from 2k preparations and
  k settings; |det W| vanishes for every k-dimensional classical model,
  with or without shared randomness;
* the linear witness I = <D_00> + <D_01> + <D_10> - <D_11> - <D_20> over
  three preparations and two settings, bounded by 3 for two-dimensional
  classical models.

Retrocausality of a strategy mixture is measured by the largest shift, for
any preparation, hidden value and pair of settings, of the hidden-value
distribution induced by changing the setting, averaged over the mixture:

    R = max_{lambda, x, y, y'} sum_g w_g |[f_g(x,y)=lambda] - [f_g(x,y')=lambda]|

For a binary hidden variable this collapses to the mixture weight of
strategies whose f disagrees across the two settings, maximized over x.
The minimum R needed to reproduce a behavior, or to reach a target value
of the linear witness, is a linear program over the retrocausal strategy
polytope with one auxiliary variable for the maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import (
    BadInputDistribution,
    OutOfRange,
    ScenarioTooSmall,
    SolverFailure,
    TooManyStrategies,
)
from .hidden_variables import (
    DEFAULT_STRATEGY_CAP,
    DeterministicStrategy,
    StrategyMixture,
    _behavior_matrix,
    _enumerate_cached,
    strategy_count,
)
from .probability import Behavior, Scenario
from .simplex import LinearProgram, LPStatus, solve

VIOLATION_TOL = 1e-9
RETRO_TOL = 1e-7

# Terms of the linear witness: (preparation x, setting y, sign).
IDW_TERMS = ((0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0), (2, 0, -1.0))
IDW_CLASSICAL_BOUND = 3.0
IDW_ALGEBRAIC_MAX = 5.0

IDW_SCENARIO = Scenario(3, 2, 2, 2)


class WitnessKind(Enum):
    DETW = "detw"
    IDW = "idw"


@dataclass(frozen=True)
class WitnessReport:
    kind: WitnessKind
    value: float
    matrix: np.ndarray | None
    classical_bound: float
    violated: bool

    def __post_init__(self) -> None:
        if self.matrix is not None:
            m = np.array(self.matrix, dtype=float)
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)


def det_witness(b: Behavior, k: int) -> WitnessReport:
    """Determinant witness |det W_k|; classical bound 0 for dimension <= k."""
    scen = b.scenario
    if scen.n_d != 2:
        raise ScenarioTooSmall(f"determinant witness needs binary outcomes, got n_d={scen.n_d}")
    if k < 1 or scen.n_x < 2 * k or scen.n_y < k:
        raise ScenarioTooSmall(
            f"witness of order {k} needs at least {2 * k} preparations and {k} settings, "
            f"got ({scen.n_x}, {scen.n_y})"
        )
    p0 = b.table[0]
    w = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            w[i, j] = p0[2 * j, i] - p0[2 * j + 1, i]
    value = abs(float(np.linalg.det(w)))
    return WitnessReport(WitnessKind.DETW, value, w, 0.0, value > VIOLATION_TOL)


def idw_witness(b: Behavior) -> WitnessReport:
    """Linear witness over three preparations and two settings; bound 3."""
    scen = b.scenario
    if scen.n_d != 2 or scen.n_x < 3 or scen.n_y < 2:
        raise ScenarioTooSmall(
            f"linear witness needs n_d=2, n_x>=3, n_y>=2, got ({scen.n_x}, {scen.n_y}, {scen.n_d})"
        )
    value = 0.0
    for x, y, sign in IDW_TERMS:
        value += sign * float(b.table[0, x, y] - b.table[1, x, y])
    return WitnessReport(
        WitnessKind.IDW, value, None, IDW_CLASSICAL_BOUND, abs(value) > IDW_CLASSICAL_BOUND + VIOLATION_TOL
    )


def _setting_pairs(n_y: int) -> list[tuple[int, int]]:
    return [(y1, y2) for y1 in range(n_y) for y2 in range(y1 + 1, n_y)]


def _disagreement_rows(f_tables: np.ndarray, scenario: Scenario) -> np.ndarray:
    """One row per retro constraint; entry g is that strategy's |shift|.

    For a binary hidden variable the shift is the same for both hidden
    values, so a single row per (x, setting pair) suffices; otherwise one
    row per hidden value is kept.
    """
    rows = []
    for x in range(scenario.n_x):
        for y1, y2 in _setting_pairs(scenario.n_y):
            if scenario.n_lambda == 2:
                rows.append((f_tables[:, x, y1] != f_tables[:, x, y2]).astype(float))
            else:
                for lam in range(scenario.n_lambda):
                    rows.append(
                        np.abs(
                            (f_tables[:, x, y1] == lam).astype(float)
                            - (f_tables[:, x, y2] == lam).astype(float)
                        )
                    )
    if not rows:
        return np.zeros((0, f_tables.shape[0]))
    return np.stack(rows)


@lru_cache(maxsize=None)
def _retro_lp_data(scenario: Scenario) -> tuple:
    """Strategies, behavior matrix, disagreement rows and witness values."""
    strategies = _enumerate_cached(scenario, True)
    matrix = _behavior_matrix(scenario, True)
    f_tables = np.stack([s.f_table() for s in strategies])
    rows = _disagreement_rows(f_tables, scenario)
    rows.setflags(write=False)
    if scenario.n_d == 2 and scenario.n_x >= 3 and scenario.n_y >= 2:
        tables = matrix.reshape(len(strategies), scenario.n_d, scenario.n_x, scenario.n_y)
        idw = np.zeros(len(strategies))
        for x, y, sign in IDW_TERMS:
            idw += sign * (tables[:, 0, x, y] - tables[:, 1, x, y])
    else:
        idw = None
    if idw is not None:
        idw.setflags(write=False)
    return strategies, matrix, rows, idw


def retro_measure_of_mixture(m: StrategyMixture) -> float:
    """Largest setting-induced shift of the hidden value; 0 when f ignores y."""
    scenario = m.scenario
    f_tables = np.stack([s.f_table() for s in m.strategies])
    rows = _disagreement_rows(f_tables, scenario)
    if rows.shape[0] == 0:
        return 0.0
    return float(np.max(rows @ m.weights))


def _input_distribution(dist, size: int, name: str) -> np.ndarray:
    if dist is None:
        return np.full(size, 1.0 / size)
    arr = np.asarray(dist, dtype=float).reshape(-1)
    if arr.size != size:
        raise BadInputDistribution(f"{name} must have {size} entries, got {arr.size}")
    if np.any(arr < -1e-12) or abs(arr.sum() - 1.0) > 1e-9:
        raise BadInputDistribution(f"{name} is not a probability vector")
    return arr


def trace_distance_measure(m: StrategyMixture, p_x=None, p_y=None) -> float:
    """Trace distance between p(lambda, y) and p(lambda) p(y).

    The joint distribution is induced by the mixture and the supplied input
    distributions (uniform by default). Zero for every mixture whose f
    ignores the setting, but also zero for some strongly retrocausal
    strategies, which is why it is not used as the retrocausality measure.
    """
    scenario = m.scenario
    px = _input_distribution(p_x, scenario.n_x, "p_x")
    py = _input_distribution(p_y, scenario.n_y, "p_y")
    f_tables = np.stack([s.f_table() for s in m.strategies])
    onehot = (f_tables[:, None, :, :] == np.arange(scenario.n_lambda)[None, :, None, None]).astype(float)
    joint = np.einsum("g,glxy,x,y->ly", m.weights, onehot, px, py)
    product = joint.sum(axis=1, keepdims=True) * py[None, :]
    return 0.5 * float(np.abs(joint - product).sum())


@dataclass(frozen=True)
class RetroReport:
    """Minimized retrocausality with its certificate mixture."""

    r_min: float
    mixture: StrategyMixture
    idw_value: float

    def __post_init__(self) -> None:
        if math.isfinite(self.idw_value):
            bound = max((self.idw_value - IDW_CLASSICAL_BOUND) / 4.0, 0.0)
            if self.r_min < bound - RETRO_TOL:
                raise SolverFailure(f"minimized R {self.r_min} below its witness bound {bound}")


def _check_cap(scenario: Scenario) -> None:
    count = strategy_count(scenario, retrocausal=True)
    if count > DEFAULT_STRATEGY_CAP:
        raise TooManyStrategies(f"{count} strategies exceed the cap of {DEFAULT_STRATEGY_CAP}")


def _certificate(
    strategies: tuple[DeterministicStrategy, ...], weights: np.ndarray
) -> StrategyMixture:
    keep = np.flatnonzero(weights > 1e-12)
    kept = weights[keep]
    return StrategyMixture(tuple(strategies[i] for i in keep), kept / kept.sum())


def min_retrocausality(b: Behavior) -> RetroReport:
    """Least retrocausality of any strategy mixture reproducing b.

    Minimizes the auxiliary bound t over mixture weights subject to exact
    behavior reproduction and, for every preparation, mixture-averaged
    hidden-value shift at most t. Every two-outcome behavior is reachable
    with a binary retrocausal hidden variable, so infeasibility signals a
    solver problem rather than a physical one.
    """
    scen = b.scenario
    _check_cap(scen)
    strategies, matrix, rows, idw_vec = _retro_lp_data(scen)
    n = len(strategies)
    entry_rows = [d * scen.n_x * scen.n_y + i for d in range(scen.n_d - 1) for i in range(scen.n_x * scen.n_y)]

    # Variables: mixture weights followed by the bound t.
    a_eq = np.zeros((len(entry_rows) + 1, n + 1))
    a_eq[:-1, :n] = matrix[:, entry_rows].T
    a_eq[-1, :n] = 1.0
    b_eq = np.concatenate([b.table.reshape(-1)[entry_rows], [1.0]])
    a_ub = np.hstack([rows, -np.ones((rows.shape[0], 1))])
    b_ub = np.zeros(rows.shape[0])
    c = np.zeros(n + 1)
    c[-1] = 1.0

    outcome = solve(LinearProgram(c=c, a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub))
    if outcome.status is not LPStatus.OPTIMAL:
        raise SolverFailure(f"retrocausality program ended with status {outcome.status}")
    mixture = _certificate(strategies, outcome.solution[:n])
    try:
        idw_value = idw_witness(b).value
    except ScenarioTooSmall:
        idw_value = float("nan")
    return RetroReport(float(outcome.value), mixture, idw_value)


def min_retro_given_idw(i_target: float, *, scenario: Scenario = IDW_SCENARIO) -> float:
    """Least retrocausality needed to reach linear-witness value i_target.

    The witness constraint is imposed as "at least i_target"; on that
    formulation the program matches max[(i_target - 3)/4, 0] across the
    full algebraic range, because behaviors with witness values below the
    classical window need no setting-dependence of the hidden variable.
    """
    if abs(i_target) > IDW_ALGEBRAIC_MAX + 1e-12:
        raise OutOfRange(f"witness target {i_target} outside [-5, 5]")
    _check_cap(scenario)
    strategies, _, rows, idw_vec = _retro_lp_data(scenario)
    if idw_vec is None:
        raise ScenarioTooSmall("scenario cannot evaluate the linear witness")
    n = len(strategies)
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    b_eq = np.array([1.0])
    witness_row = np.concatenate([-idw_vec, [0.0]])[None, :]
    a_ub = np.vstack([np.hstack([rows, -np.ones((rows.shape[0], 1))]), witness_row])
    b_ub = np.concatenate([np.zeros(rows.shape[0]), [-float(i_target)]])
    c = np.zeros(n + 1)
    c[-1] = 1.0
    outcome = solve(LinearProgram(c=c, a_eq=a_eq, b_eq=b_eq, a_ub=a_ub, b_ub=b_ub))
    if outcome.status is not LPStatus.OPTIMAL:
        raise SolverFailure(f"witness-constrained program ended with status {outcome.status}")
    return float(outcome.value)
