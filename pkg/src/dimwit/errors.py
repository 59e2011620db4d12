"""Shared exception hierarchy.

Every error raised by the library derives from DimwitError, so callers can
catch one base class. Validation errors also derive from ValueError.
"""


class DimwitError(Exception):
    """Base class for all toolkit errors."""


class ShapeMismatch(DimwitError, ValueError):
    """A probability table does not have the shape its scenario requires."""


class NegativeProbability(DimwitError, ValueError):
    """A probability table contains an entry below zero."""


class NotNormalized(DimwitError, ValueError):
    """A conditional distribution slice does not sum to one."""


class ScenarioMismatch(DimwitError, ValueError):
    """Objects from different scenarios were combined."""


class BadWeights(DimwitError, ValueError):
    """A mixing weight vector is negative or does not sum to one."""


class NonBinaryOutcome(DimwitError, ValueError):
    """An operation defined for two-outcome behaviors got something else."""


class InvalidConfig(DimwitError, ValueError):
    """An experiment configuration violates its invariants."""


class ModeUnsupported(DimwitError, ValueError):
    """The requested operation is undefined for this experiment mode."""


class TooManyStrategies(DimwitError):
    """Deterministic-strategy enumeration would exceed the size cap."""


class UnsupportedQuery(DimwitError):
    """The requested analysis variant is not supported."""


class ScenarioTooSmall(DimwitError, ValueError):
    """The behavior has too few preparations or settings for a witness."""


class BadInputDistribution(DimwitError, ValueError):
    """A supplied input distribution is not a probability vector."""


class OutOfRange(DimwitError, ValueError):
    """A requested target value lies outside the attainable range."""


class DimensionMismatch(DimwitError, ValueError):
    """Linear-program blocks have inconsistent dimensions."""


class IterationLimit(DimwitError):
    """The simplex solver exceeded its pivot budget."""


class SolverFailure(DimwitError):
    """The linear-program solver returned an unusable result."""
