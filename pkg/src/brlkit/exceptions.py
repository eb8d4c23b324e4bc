"""Exception hierarchy.

Every error raised on purpose by the toolkit derives from :class:`BrlkitError`.
The three intermediate classes decide how the command line maps a failure to
an exit code: a property that does not hold, a malformed request, or a
numerical breakdown.
"""


class BrlkitError(Exception):
    """Base class for all toolkit errors."""


class PropertyFailure(BrlkitError):
    """The input is well formed but the requested property does not hold."""


class UsageError(BrlkitError, ValueError):
    """Malformed input: wrong shapes, bad parameters, unreadable files."""


class NumericalFailure(BrlkitError, ArithmeticError):
    """A computation could not be carried out to the requested accuracy."""


# usage
class DimensionMismatch(UsageError):
    pass


class NonPositiveScale(UsageError):
    pass


class NonPositiveEpsilon(UsageError):
    pass


class NotHermitian(UsageError):
    pass


class InconsistentTrajectory(UsageError):
    pass


class SchemaError(UsageError):
    pass


class NonFiniteEntry(SchemaError):
    pass


class IoError(UsageError, OSError):
    pass


# property failures
class UnstableSystem(PropertyFailure):
    pass


class NotMinimal(PropertyFailure):
    pass


class MomentMismatch(PropertyFailure):
    pass


class InfeasibleScaling(PropertyFailure):
    """The Riccati middle term lost positivity: the norm is not below one."""


class NotStrictSchur(PropertyFailure):
    pass


class NotContractiveTarget(PropertyFailure):
    pass


class InvalidSimilarity(PropertyFailure):
    pass


class NotPositiveDefinite(PropertyFailure):
    pass


# numerical failures
class SingularResolvent(NumericalFailure):
    pass


class SingularTransform(NumericalFailure):
    pass


class SingularMiddleTerm(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass


class NoEpsilonFound(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass
