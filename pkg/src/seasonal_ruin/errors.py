"""Exception hierarchy.

Every numerical failure carries a class name that the command line front end
prints verbatim, so the names are part of the public surface.
"""


class SeasonalRuinError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDistribution(SeasonalRuinError, ValueError):
    pass


class InvalidArgument(SeasonalRuinError, ValueError):
    pass


class DomainError(SeasonalRuinError, ValueError):
    pass


class InvalidModel(SeasonalRuinError, ValueError):
    pass


class NetProfitViolation(SeasonalRuinError):
    pass


class RootCountMismatch(SeasonalRuinError):
    """Wrong number of roots inside the unit disk.

    ``candidates`` holds every root of the deflated polynomial and
    ``moduli`` their absolute values, for post-mortem inspection.
    """

    def __init__(self, message, candidates=(), expected=None):
        super().__init__(message)
        self.candidates = list(candidates)
        self.moduli = [abs(c) for c in self.candidates]
        self.expected = expected


class RootRefinementFailure(SeasonalRuinError):
    pass


class SingularInitialSystem(SeasonalRuinError):
    def __init__(self, message, rank=None, zero_z0=()):
        super().__init__(message)
        self.rank = rank
        self.zero_z0 = tuple(zero_z0)


class NonProbabilisticSolution(SeasonalRuinError):
    pass


class DegenerateRecursionFailure(SeasonalRuinError):
    pass


class NonProbabilisticSequence(SeasonalRuinError):
    pass


class ConsistencyFailure(SeasonalRuinError):
    pass


class OracleTooLarge(SeasonalRuinError):
    pass


class ResourceLimitExceeded(SeasonalRuinError):
    pass


class ConfigError(SeasonalRuinError):
    pass
