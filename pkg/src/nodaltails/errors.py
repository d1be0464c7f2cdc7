"""Exception hierarchy shared by every module of the package."""


class NodalTailsError(Exception):
    """Base class for all errors raised by nodaltails."""


class GraphError(NodalTailsError, ValueError):
    """Invalid dual-graph input."""


class EmptyGraphError(GraphError):
    """Raised when a graph is requested with fewer than one component."""


class OutOfRangeError(GraphError):
    """Raised when an edge endpoint or component index is outside ``1..p``."""


class DisconnectedError(GraphError):
    """Raised when the multigraph underlying a curve is not connected."""


class GuardExceededError(NodalTailsError):
    """Raised when an exhaustive scan over ``2**p`` subcurves is refused."""


class ChainViolationError(NodalTailsError):
    """A family expected to be a nested chain is not one.

    This indicates a bug, never bad input.
    """


class ClosureViolationError(NodalTailsError):
    """A wedge of candidates fell outside the candidate family."""


class SelfTestError(NodalTailsError):
    """An identity that must hold by construction failed at runtime."""


class QuasistabilityViolation(NodalTailsError):
    """Raised in strict mode when a twisted multidegree is not quasistable."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
