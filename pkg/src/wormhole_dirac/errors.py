"""Exception hierarchy.

Errors deriving from ``ValueError`` signal violated preconditions (bad input);
the rest signal that a well-posed computation could not be completed.
"""


class WormholeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(WormholeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class EmptyDomain(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class SectorError(WormholeError, ValueError):
    """Coupling does not sit in a sector with closed-form solutions."""


class PochhammerPole(WormholeError, ZeroDivisionError):
    pass


class RecurrenceBreakdown(WormholeError, ZeroDivisionError):
    pass


class NoConvergence(WormholeError):
    pass


class ThroatSingularity(WormholeError):
    """Evaluation at a point where the meridian radius vanishes."""


class MassShellSingularity(WormholeError):
    """The lower spinor component is undefined because E + M = 0."""


class BranchCutHit(WormholeError):
    pass


class RootNotBracketed(WormholeError):
    pass


class SingularSample(WormholeError):
    pass


class NoTermination(WormholeError):
    pass
