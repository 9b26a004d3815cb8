"""Exception hierarchy shared by every module."""


class BersError(Exception):
    """Base class for all package errors."""


class NonHyperbolicTrace(BersError, ValueError):
    pass


class DegenerateLength(BersError, ValueError):
    pass


class DegenerateBound(BersError, ValueError):
    pass


class EllipticAxis(BersError, ValueError):
    pass


class InvalidLaminarFamily(BersError, ValueError):
    pass


class TraceMismatch(BersError, RuntimeError):
    pass


class ParseError(BersError, ValueError):
    pass


class UnbalancedCut(BersError, ValueError):
    pass


class NonSeparatingWord(BersError, ValueError):
    pass


class RangeTooSmall(BersError, ValueError):
    pass


class RangeTooLarge(BersError, ValueError):
    pass


class NTooLarge(BersError, ValueError):
    pass


class NoBalancedCandidate(BersError, RuntimeError):
    pass


class NoValidRootEdge(BersError, RuntimeError):
    pass


class MalformedInstance(BersError, ValueError):
    pass


class InsertionBoundViolated(BersError, RuntimeError):
    pass


class NoCompletion(BersError, RuntimeError):
    pass


class MergeCountMismatch(BersError, RuntimeError):
    pass


class BoundViolated(BersError, RuntimeError):
    pass


class ParityInconsistency(BersError, ValueError):
    pass


class WrongCurveCount(BersError, ValueError):
    pass


class DomainError(BersError, ValueError):
    pass


class ConfigError(BersError, ValueError):
    pass
