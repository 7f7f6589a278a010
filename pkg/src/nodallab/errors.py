"""Exception types raised across nodallab."""


class NodalLabError(Exception):
    """Base class for all library errors."""


class DomainError(NodalLabError, ValueError):
    """Argument outside the domain of a function."""


class ConvergenceError(NodalLabError, RuntimeError):
    """An iterative method failed to reach its tolerance."""


class ParallelAxesError(NodalLabError, ValueError):
    """Two nodal-circle axes are (numerically) parallel."""


class CriticalLevelError(NodalLabError, RuntimeError):
    """Zero is numerically a critical value: the gradient degenerates on the nodal set."""


class DegenerateError(NodalLabError, ValueError):
    """A function is (numerically) zero on too much of a mesh."""


class TheoremViolation(NodalLabError, AssertionError):
    """A common-zero search on a simply connected surface came back empty."""


class SearchFailure(NodalLabError, RuntimeError):
    """Group-orbit descent did not produce a certified point."""
