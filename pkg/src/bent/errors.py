"""Exception types raised across the toolkit."""


class BentError(Exception):
    """Base class for all toolkit errors."""


class NegativeCoefficient(BentError, ValueError):
    """A Schmidt coefficient is negative beyond tolerance."""


class NotNormalized(BentError, ValueError):
    """Coefficients do not sum to one within the input tolerance."""


class DimensionShrink(BentError, ValueError):
    """Embedding target dimension is smaller than the state dimension."""


class DimensionMismatch(BentError, ValueError):
    """Two states that must share a dimension do not."""


class DimensionTooLarge(BentError, ValueError):
    """Dimension exceeds the d <= 10 cap (the permutation sum has d! terms)."""


class BadProbabilities(BentError, ValueError):
    """Ensemble branch probabilities are invalid or do not sum to one."""


class NotOptimalProtocol(BentError, ValueError):
    """Leading branch probability disagrees with the optimal conversion probability."""


class UnsupportedClosedForm(BentError, ValueError):
    """No closed-form expression is registered for the requested measure/dimension."""


class EmptySubset(BentError, ValueError):
    """A qubit splitting needs at least one qubit on the moved side."""


class InconsistentTable(BentError, ValueError):
    """A splitting table does not correspond to any valid coefficient vector."""


class VariableMismatch(BentError, ValueError):
    """Polynomial operands are defined over different variable counts."""


class DegreeTooSmall(BentError, ValueError):
    """The requested total degree leaves no room for the required multipliers."""


class SolverDidNotConverge(BentError, RuntimeError):
    """The SDP solver stopped without either a solution or an infeasibility proof."""


class NumericalBreakdown(BentError, RuntimeError):
    """The SDP solver failed in a way that invalidates its output."""


class UnknownFamily(BentError, ValueError):
    """Requested boundary family is not registered."""


class UnsupportedDim(BentError, ValueError):
    """Operation only available for specific dimensions."""
