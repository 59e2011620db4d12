"""Classical causal models for prepare-and-measure statistics.

A classical explanation of a behavior p(d|x,y) with a hidden variable of
dimension n_lambda factorizes as

    p(d|x,y) = sum_lambda p(d|y,lambda) p(lambda|x)

and every such model is a convex mixture of deterministic strategies: a
response function f mapping the preparation to a hidden value (f may also
see the measurement choice in the retrocausal variant) together with a
response function g mapping (setting, hidden value) to the outcome.

Strategies carry a canonical integer encoding: the f table is read as a
big-endian base-n_lambda numeral over lexicographic (x) or (x, y) order,
the g table as a big-endian base-n_d numeral over lexicographic
(y, lambda) order. Enumeration emits strategies ordered by (f code, g code).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BadWeights,
    InvalidConfig,
    NotNormalized,
    ScenarioMismatch,
    SolverFailure,
    TooManyStrategies,
    UnsupportedQuery,
)
from .probability import (
    TABLE_TOL,
    Behavior,
    JointBehavior,
    Scenario,
    make_behavior,
    make_joint_behavior,
)
from .simplex import LinearProgram, LPStatus, solve

DEFAULT_STRATEGY_CAP = 10**7
MEMBERSHIP_TOL = 1e-8
_WEIGHT_PRUNE_TOL = 1e-12


def _encode(digits: np.ndarray, base: int) -> int:
    code = 0
    for digit in digits.reshape(-1):
        code = code * base + int(digit)
    return code


def _decode(code: int, base: int, length: int) -> np.ndarray:
    digits = np.zeros(length, dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        code, digits[pos] = divmod(code, base)
    if code:
        raise InvalidConfig(f"code does not fit in {length} base-{base} digits")
    return digits


@dataclass(frozen=True)
class DeterministicStrategy:
    """One deterministic classical response pair (f, g).

    f has shape (n_x,) for the causal variant or (n_x, n_y) when the hidden
    value may depend on the later measurement choice; g has shape
    (n_y, n_lambda).
    """

    scenario: Scenario
    retrocausal: bool
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        s = self.scenario
        f = np.asarray(self.f, dtype=np.int64)
        g = np.asarray(self.g, dtype=np.int64)
        f_shape = (s.n_x, s.n_y) if self.retrocausal else (s.n_x,)
        if f.shape != f_shape:
            raise InvalidConfig(f"f table has shape {f.shape}, expected {f_shape}")
        if g.shape != (s.n_y, s.n_lambda):
            raise InvalidConfig(f"g table has shape {g.shape}, expected {(s.n_y, s.n_lambda)}")
        if f.size and (f.min() < 0 or f.max() >= s.n_lambda):
            raise InvalidConfig("f values must lie in [0, n_lambda)")
        if g.size and (g.min() < 0 or g.max() >= s.n_d):
            raise InvalidConfig("g values must lie in [0, n_d)")
        f.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)

    @property
    def f_code(self) -> int:
        return _encode(self.f, self.scenario.n_lambda)

    @property
    def g_code(self) -> int:
        return _encode(self.g, self.scenario.n_d)

    @classmethod
    def from_codes(
        cls, scenario: Scenario, retrocausal: bool, f_code: int, g_code: int
    ) -> "DeterministicStrategy":
        f_len = scenario.n_x * scenario.n_y if retrocausal else scenario.n_x
        f = _decode(f_code, scenario.n_lambda, f_len)
        if retrocausal:
            f = f.reshape(scenario.n_x, scenario.n_y)
        g = _decode(g_code, scenario.n_d, scenario.n_y * scenario.n_lambda)
        return cls(scenario, retrocausal, f, g.reshape(scenario.n_y, scenario.n_lambda))

    def hidden_value(self, x: int, y: int) -> int:
        return int(self.f[x, y]) if self.retrocausal else int(self.f[x])

    def outcome(self, x: int, y: int) -> int:
        return int(self.g[y, self.hidden_value(x, y)])

    def f_table(self) -> np.ndarray:
        """f as an (n_x, n_y) array regardless of the retrocausal flag."""
        if self.retrocausal:
            return self.f
        return np.broadcast_to(self.f[:, None], (self.scenario.n_x, self.scenario.n_y))


@dataclass(frozen=True)
class StrategyMixture:
    """Probability weights over deterministic strategies of one scenario."""

    strategies: tuple[DeterministicStrategy, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        strategies = tuple(self.strategies)
        if not strategies:
            raise BadWeights("mixture needs at least one strategy")
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size != len(strategies):
            raise BadWeights(f"{w.size} weights for {len(strategies)} strategies")
        if np.any(w < -TABLE_TOL):
            raise BadWeights(f"weights must be nonnegative (min {w.min()})")
        if abs(w.sum() - 1.0) > TABLE_TOL:
            raise BadWeights(f"weights sum to {w.sum()}, expected 1")
        first = strategies[0]
        for s in strategies[1:]:
            if s.scenario != first.scenario or s.retrocausal != first.retrocausal:
                raise ScenarioMismatch("mixture strategies must share scenario and retrocausal flag")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "weights", w)

    @property
    def scenario(self) -> Scenario:
        return self.strategies[0].scenario

    @property
    def retrocausal(self) -> bool:
        return self.strategies[0].retrocausal


def strategy_count(scenario: Scenario, retrocausal: bool) -> int:
    """Number of deterministic strategies, computed in exact integers."""
    f_slots = scenario.n_x * scenario.n_y if retrocausal else scenario.n_x
    return scenario.n_lambda**f_slots * scenario.n_d ** (scenario.n_y * scenario.n_lambda)


@lru_cache(maxsize=None)
def _enumerate_cached(scenario: Scenario, retrocausal: bool) -> tuple[DeterministicStrategy, ...]:
    n_f = scenario.n_lambda ** (scenario.n_x * scenario.n_y if retrocausal else scenario.n_x)
    n_g = scenario.n_d ** (scenario.n_y * scenario.n_lambda)
    return tuple(
        DeterministicStrategy.from_codes(scenario, retrocausal, f_code, g_code)
        for f_code in range(n_f)
        for g_code in range(n_g)
    )


def enumerate_strategies(
    scenario: Scenario, retrocausal: bool, *, cap: int = DEFAULT_STRATEGY_CAP
) -> list[DeterministicStrategy]:
    """All deterministic strategies in canonical (f code, g code) order."""
    count = strategy_count(scenario, retrocausal)
    if count > cap:
        raise TooManyStrategies(f"{count} strategies exceed the cap of {cap}")
    return list(_enumerate_cached(scenario, retrocausal))


def _strategy_table(s: DeterministicStrategy) -> np.ndarray:
    scen = s.scenario
    lam = s.f_table()
    outcomes = s.g[np.arange(scen.n_y)[None, :], lam]
    return (np.arange(scen.n_d)[:, None, None] == outcomes[None, :, :]).astype(float)


def strategy_behavior(s: DeterministicStrategy | StrategyMixture) -> Behavior:
    """The behavior p(d|x,y) realized by a strategy or strategy mixture."""
    if isinstance(s, DeterministicStrategy):
        return make_behavior(s.scenario, _strategy_table(s), tol=TABLE_TOL)
    table = np.einsum("g,gdxy->dxy", s.weights, np.stack([_strategy_table(t) for t in s.strategies]))
    return make_behavior(s.scenario, table, tol=TABLE_TOL)


@lru_cache(maxsize=None)
def _behavior_matrix(scenario: Scenario, retrocausal: bool) -> np.ndarray:
    """Rows are flattened (d, x, y) behavior tables, one per strategy."""
    strategies = _enumerate_cached(scenario, retrocausal)
    matrix = np.stack([_strategy_table(s).reshape(-1) for s in strategies])
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True)
class HVModelSpec:
    """Stochastic hidden-variable model with a detector noise term.

    lambda_dist[l, x] is p(lambda|x), noise_dist[u] is p(u), and
    response[d, y, l, u] is p(d|y, lambda, u). The induced behavior is the
    contraction over lambda and u.
    """

    lambda_dist: np.ndarray
    noise_dist: np.ndarray
    response: np.ndarray

    def __post_init__(self) -> None:
        lam = np.asarray(self.lambda_dist, dtype=float)
        noise = np.asarray(self.noise_dist, dtype=float)
        resp = np.asarray(self.response, dtype=float)
        if lam.ndim != 2 or noise.ndim != 1 or resp.ndim != 4:
            raise InvalidConfig("lambda_dist must be 2-d, noise_dist 1-d, response 4-d")
        if resp.shape[2] != lam.shape[0] or resp.shape[3] != noise.size:
            raise InvalidConfig(f"response shape {resp.shape} inconsistent with lambda/noise sizes")
        for name, arr, axis in (("lambda_dist", lam, 0), ("noise_dist", noise, 0), ("response", resp, 0)):
            if np.any(arr < -TABLE_TOL):
                raise InvalidConfig(f"{name} has negative entries")
            sums = arr.sum(axis=axis)
            if np.max(np.abs(sums - 1.0)) > TABLE_TOL:
                raise NotNormalized(f"{name} slices deviate from unit sum")
        for name, arr in (("lambda_dist", lam), ("noise_dist", noise), ("response", resp)):
            arr.setflags(write=False)
        object.__setattr__(self, "lambda_dist", lam)
        object.__setattr__(self, "noise_dist", noise)
        object.__setattr__(self, "response", resp)

    def behavior(self, n_lambda_label: int | None = None) -> Behavior:
        """Contract the model into p(d|x,y)."""
        n_d, n_y, n_lambda, _ = self.response.shape
        n_x = self.lambda_dist.shape[1]
        table = np.einsum("dylu,u,lx->dxy", self.response, self.noise_dist, self.lambda_dist)
        scenario = Scenario(n_x, n_y, n_d, n_lambda_label if n_lambda_label is not None else n_lambda)
        return make_behavior(scenario, table, tol=TABLE_TOL)


def wdce_hv_model(phi) -> Behavior:
    """Two-valued hidden-variable model reproducing the open/closed statistics.

    The hidden value is distributed as p(lambda=0|x) = cos^2(phi_x/2). With
    the interferometer open (y=0) the detector fires according to an
    unbiased local noise bit, ignoring lambda; with it closed (y=1) the
    outcome reveals lambda directly.
    """
    phases = np.asarray(tuple(phi), dtype=float)
    if phases.ndim != 1 or phases.size == 0:
        raise InvalidConfig("phi must be a non-empty sequence of phases")
    lam = np.empty((2, phases.size))
    lam[0] = np.cos(phases / 2.0) ** 2
    lam[1] = np.sin(phases / 2.0) ** 2
    noise = np.array([0.5, 0.5])
    response = np.zeros((2, 2, 2, 2))
    for d in range(2):
        response[d, 0, :, d] = 1.0  # open: follow the noise bit
        response[d, 1, d, :] = 1.0  # closed: reveal lambda
    return HVModelSpec(lam, noise, response).behavior()


def qdce_hv_model(phi, alpha: float) -> JointBehavior:
    """Classical model for the quantum-controlled variant.

    The quantum control is replaced by a second hidden variable mu with
    p(mu=0) = cos^2(alpha) that fixes the observed setting, p(y|mu) being
    deterministic; the photon-side responses are those of the open/closed
    model after the noise bit is traced out.
    """
    phases = np.asarray(tuple(phi), dtype=float)
    if phases.ndim != 1 or phases.size == 0:
        raise InvalidConfig("phi must be a non-empty sequence of phases")
    lam = np.empty((2, phases.size))
    lam[0] = np.cos(phases / 2.0) ** 2
    lam[1] = np.sin(phases / 2.0) ** 2
    p_mu = np.array([math.cos(alpha) ** 2, math.sin(alpha) ** 2])
    response = np.zeros((2, 2, 2))  # p(d | y, lambda)
    response[:, 0, :] = 0.5
    response[0, 1, 0] = 1.0
    response[1, 1, 1] = 1.0
    table = np.einsum("dyl,lx,y->dyx", response, lam, p_mu)
    scenario = Scenario(phases.size, 2, 2, 2)
    return make_joint_behavior(scenario, table, tol=TABLE_TOL)


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a classical-dimension membership test.

    inside carries a mixture certificate whose re-mixed behavior matches
    the target within max_residual; outside carries the minimum total
    constraint violation found by the feasibility phase.
    """

    inside: bool
    certificate: StrategyMixture | None
    infeasibility: float | None
    max_residual: float | None


def classical_membership(b: Behavior, k: int, shared_randomness: bool = True) -> MembershipResult:
    """Test whether p(d|x,y) admits a k-dimensional classical model.

    The test runs a feasibility linear program over mixtures of the
    (shared-randomness) deterministic strategies. Product mixtures without
    shared randomness form a non-convex set and are not supported.
    """
    if not shared_randomness:
        raise UnsupportedQuery("membership without shared randomness is not supported")
    scen = b.scenario
    scenario_k = Scenario(scen.n_x, scen.n_y, scen.n_d, k)
    count = strategy_count(scenario_k, retrocausal=False)
    if count > DEFAULT_STRATEGY_CAP:
        raise TooManyStrategies(f"{count} strategies exceed the cap of {DEFAULT_STRATEGY_CAP}")
    strategies = _enumerate_cached(scenario_k, False)
    matrix = _behavior_matrix(scenario_k, False)

    # Equality rows: behavior entries for all but the last outcome (the
    # last is implied by normalization), plus total weight one.
    entry_rows = [d * scen.n_x * scen.n_y + i for d in range(scen.n_d - 1) for i in range(scen.n_x * scen.n_y)]
    a_eq = np.vstack([matrix[:, entry_rows].T, np.ones((1, len(strategies)))])
    b_eq = np.concatenate([b.table.reshape(-1)[entry_rows], [1.0]])
    outcome = solve(LinearProgram(c=np.zeros(len(strategies)), a_eq=a_eq, b_eq=b_eq))
    if outcome.status is LPStatus.INFEASIBLE:
        return MembershipResult(False, None, float(outcome.value), None)
    if outcome.status is not LPStatus.OPTIMAL:
        raise SolverFailure(f"membership program ended with status {outcome.status}")

    keep = np.flatnonzero(outcome.solution > _WEIGHT_PRUNE_TOL)
    weights = outcome.solution[keep]
    weights = weights / weights.sum()
    certificate = StrategyMixture(tuple(strategies[i] for i in keep), weights)
    mixed = np.einsum("g,gt->t", weights, matrix[keep])
    max_residual = float(np.max(np.abs(mixed - b.table.reshape(-1))))
    if max_residual > MEMBERSHIP_TOL:
        raise SolverFailure(f"membership certificate off by {max_residual}")
    return MembershipResult(True, certificate, None, max_residual)
