"""Device-independent causal analysis of delayed-choice interferometry.

The package generates exact quantum statistics for delayed-choice
experiments, builds the classical hidden-variable models that reproduce
them, and quantifies when no such model exists via dimension witnesses and
a linear-programming retrocausality bound.
"""

from .errors import (
    BadInputDistribution,
    BadWeights,
    DimensionMismatch,
    DimwitError,
    InvalidConfig,
    IterationLimit,
    ModeUnsupported,
    NegativeProbability,
    NonBinaryOutcome,
    NotNormalized,
    OutOfRange,
    ScenarioMismatch,
    ScenarioTooSmall,
    ShapeMismatch,
    SolverFailure,
    TooManyStrategies,
    UnsupportedQuery,
)
from .hidden_variables import (
    DeterministicStrategy,
    HVModelSpec,
    MembershipResult,
    StrategyMixture,
    classical_membership,
    enumerate_strategies,
    qdce_hv_model,
    strategy_behavior,
    strategy_count,
    wdce_hv_model,
)
from .interferometer import (
    ExperimentConfig,
    Mode,
    PathState,
    modified_statistics,
    output_state,
    qdce_statistics,
    wheeler_statistics,
)
from .probability import (
    Behavior,
    JointBehavior,
    Scenario,
    ThreeOutcomeBehavior,
    coarse_grain,
    expectation_d,
    make_behavior,
    make_joint_behavior,
    make_three_outcome_behavior,
    mix,
)
from .simplex import LinearProgram, LPOutcome, LPStatus
from .simplex import solve as solve_lp
from .witnesses import (
    RetroReport,
    WitnessKind,
    WitnessReport,
    det_witness,
    idw_witness,
    min_retro_given_idw,
    min_retrocausality,
    retro_measure_of_mixture,
    trace_distance_measure,
)

__version__ = "0.1.0"

__all__ = [
    "BadInputDistribution",
    "BadWeights",
    "Behavior",
    "DeterministicStrategy",
    "DimensionMismatch",
    "DimwitError",
    "ExperimentConfig",
    "HVModelSpec",
    "InvalidConfig",
    "IterationLimit",
    "JointBehavior",
    "LPOutcome",
    "LPStatus",
    "LinearProgram",
    "MembershipResult",
    "Mode",
    "ModeUnsupported",
    "NegativeProbability",
    "NonBinaryOutcome",
    "NotNormalized",
    "OutOfRange",
    "PathState",
    "RetroReport",
    "Scenario",
    "ScenarioMismatch",
    "ScenarioTooSmall",
    "ShapeMismatch",
    "SolverFailure",
    "StrategyMixture",
    "ThreeOutcomeBehavior",
    "TooManyStrategies",
    "UnsupportedQuery",
    "WitnessKind",
    "WitnessReport",
    "classical_membership",
    "coarse_grain",
    "det_witness",
    "enumerate_strategies",
    "expectation_d",
    "idw_witness",
    "make_behavior",
    "make_joint_behavior",
    "make_three_outcome_behavior",
    "min_retro_given_idw",
    "min_retrocausality",
    "mix",
    "modified_statistics",
    "output_state",
    "qdce_hv_model",
    "qdce_statistics",
    "retro_measure_of_mixture",
    "solve_lp",
    "strategy_behavior",
    "strategy_count",
    "trace_distance_measure",
    "wdce_hv_model",
    "wheeler_statistics",
]
