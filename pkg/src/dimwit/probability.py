"""Finite probability primitives for prepare-and-measure experiments.

A behavior is the full conditional distribution p(d|x,y) of outcomes d given
a preparation choice x and a measurement choice y, stored as a dense float64
tensor indexed (d, x, y). The joint variant p(d,y|x), used when the
measurement choice itself is an observed outcome, is indexed (d, y, x).

Outcome convention, fixed package-wide: d=0 is a click at the monitored
constructive-interference port, so that for a lossless balanced
interferometer p(d=0|x,y) carries the +cos interference fringe and the
binary expectation value equals cos(phi - sigma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadWeights,
    InvalidConfig,
    NegativeProbability,
    NonBinaryOutcome,
    NotNormalized,
    ScenarioMismatch,
    ShapeMismatch,
)

# Validation tolerances: user-supplied tables may be off by rounding from
# serialization; internally generated tables must be tight.
INPUT_TOL = 1e-9
TABLE_TOL = 1e-12


@dataclass(frozen=True)
class Scenario:
    """Cardinalities of a prepare-and-measure scenario.

    n_x preparations, n_y measurement settings, n_d outcomes, and the
    dimension n_lambda of the classical (hidden) variable being tested.
    """

    n_x: int
    n_y: int
    n_d: int
    n_lambda: int

    def __post_init__(self) -> None:
        for name in ("n_x", "n_y", "n_d", "n_lambda"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidConfig(f"{name} must be a positive integer, got {value!r}")


def _freeze(table: np.ndarray) -> np.ndarray:
    out = np.array(table, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def _check_table(table: np.ndarray, shape: tuple[int, ...], sum_axes: tuple[int, ...], tol: float) -> None:
    if table.shape != shape:
        raise ShapeMismatch(f"table shape {table.shape} does not match scenario shape {shape}")
    if not np.all(np.isfinite(table)):
        raise NegativeProbability("table contains non-finite entries")
    if np.any(table < -tol):
        raise NegativeProbability(f"table contains negative entries (min {table.min()})")
    sums = table.sum(axis=sum_axes)
    worst = np.max(np.abs(sums - 1.0))
    if worst > tol:
        raise NotNormalized(f"conditional slices deviate from unit sum by up to {worst}")


@dataclass(frozen=True)
class Behavior:
    """Conditional distribution p(d|x,y), table indexed (d, x, y)."""

    scenario: Scenario
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))

    def prob(self, d: int, x: int, y: int) -> float:
        return float(self.table[d, x, y])


@dataclass(frozen=True)
class JointBehavior:
    """Joint distribution p(d,y|x), table indexed (d, y, x)."""

    scenario: Scenario
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))

    def prob(self, d: int, y: int, x: int) -> float:
        return float(self.table[d, y, x])

    def setting_marginal(self, y: int, x: int) -> float:
        """p(y|x), summed over outcomes."""
        return float(self.table[:, y, x].sum())


@dataclass(frozen=True)
class ThreeOutcomeBehavior:
    """Behavior with outcomes (E-click, D-click, no-click), indexed (d, x, y).

    Outcome 0 is a click at the monitored port E, outcome 1 a click at the
    other port D, outcome 2 records photon loss or detector no-click.
    """

    scenario: Scenario
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))

    def prob(self, d: int, x: int, y: int) -> float:
        return float(self.table[d, x, y])


def make_behavior(scenario: Scenario, table: np.ndarray, *, tol: float = INPUT_TOL) -> Behavior:
    """Validate a p(d|x,y) table against its scenario and wrap it.

    Raises ShapeMismatch, NegativeProbability, or NotNormalized (any (x,y)
    slice off by more than tol).
    """
    arr = np.asarray(table, dtype=float)
    _check_table(arr, (scenario.n_d, scenario.n_x, scenario.n_y), (0,), tol)
    return Behavior(scenario, arr)


def make_joint_behavior(scenario: Scenario, table: np.ndarray, *, tol: float = INPUT_TOL) -> JointBehavior:
    """Validate a p(d,y|x) table (normalized over d and y jointly, per x)."""
    arr = np.asarray(table, dtype=float)
    _check_table(arr, (scenario.n_d, scenario.n_y, scenario.n_x), (0, 1), tol)
    return JointBehavior(scenario, arr)


def make_three_outcome_behavior(
    scenario: Scenario, table: np.ndarray, *, tol: float = INPUT_TOL
) -> ThreeOutcomeBehavior:
    """Validate a three-outcome table; the scenario must have n_d=3."""
    if scenario.n_d != 3:
        raise NonBinaryOutcome(f"three-outcome behavior needs n_d=3, scenario has n_d={scenario.n_d}")
    arr = np.asarray(table, dtype=float)
    _check_table(arr, (3, scenario.n_x, scenario.n_y), (0,), tol)
    return ThreeOutcomeBehavior(scenario, arr)


def expectation_d(b: Behavior, x: int, y: int) -> float:
    """Binary expectation value p(d=0|x,y) - p(d=1|x,y), in [-1, 1]."""
    if b.scenario.n_d != 2:
        raise NonBinaryOutcome(f"expectation value needs two outcomes, got n_d={b.scenario.n_d}")
    return float(b.table[0, x, y] - b.table[1, x, y])


def mix(behaviors: list[Behavior], weights) -> Behavior:
    """Convex combination of behaviors over a shared scenario."""
    if not behaviors:
        raise BadWeights("cannot mix an empty list of behaviors")
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size != len(behaviors):
        raise BadWeights(f"got {w.size} weights for {len(behaviors)} behaviors")
    if np.any(w < -TABLE_TOL):
        raise BadWeights(f"weights must be nonnegative (min {w.min()})")
    if abs(w.sum() - 1.0) > TABLE_TOL:
        raise BadWeights(f"weights sum to {w.sum()}, expected 1")
    scenario = behaviors[0].scenario
    for b in behaviors[1:]:
        if b.scenario != scenario:
            raise ScenarioMismatch(f"cannot mix scenarios {b.scenario} and {scenario}")
    table = np.einsum("g,gdxy->dxy", w, np.stack([b.table for b in behaviors]))
    # Mixing preserves each input's normalization error, which may be at the
    # looser input tolerance for deserialized tables.
    return make_behavior(scenario, table, tol=INPUT_TOL)


def coarse_grain(b3: ThreeOutcomeBehavior) -> Behavior:
    """Reduce to the binary outcome of the single monitored detector.

    d=0 keeps the E-click probability; d=1 absorbs both the D-click and the
    no-click outcomes.
    """
    if b3.scenario.n_d != 3:
        raise NonBinaryOutcome(f"coarse_grain needs n_d=3, got n_d={b3.scenario.n_d}")
    scenario = Scenario(b3.scenario.n_x, b3.scenario.n_y, 2, b3.scenario.n_lambda)
    table = np.stack([b3.table[0], b3.table[1] + b3.table[2]])
    return make_behavior(scenario, table, tol=INPUT_TOL)
