"""Exception hierarchy shared by every solver in the package."""


class EdgeSchedError(Exception):
    pass


class InvalidInstance(EdgeSchedError, ValueError):
    """Raised by :func:`edgesched.model.validate` when an instance breaks an invariant."""


class NonMonotoneAccuracy(InvalidInstance):
    pass


class NonPositiveTime(InvalidInstance):
    pass


class NonPositiveDeadline(InvalidInstance):
    pass


class DimensionMismatch(InvalidInstance):
    pass


class CommExceedsTotal(InvalidInstance):
    pass


class NotIdenticalJobs(InvalidInstance):
    pass


class IndexOutOfRange(EdgeSchedError, IndexError):
    pass


class InfeasibleInstance(EdgeSchedError):
    """No schedule satisfies the deadline (or the relaxation itself is infeasible)."""


class SubIlpInfeasible(InfeasibleInstance):
    pass


class TooLarge(EdgeSchedError):
    pass


class InternalError(EdgeSchedError, RuntimeError):
    pass
