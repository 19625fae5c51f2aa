"""Exception hierarchy shared by all gospace modules."""


class GospaceError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(GospaceError, ValueError):
    """Malformed input: wrong dimensions, bad tolerances, broken tensors."""


class DegenerateLagrangianError(GospaceError):
    """A quadratic Lagrangian (or Hamiltonian) is singular."""


class NoEquilibriumError(GospaceError):
    """The relative-equilibrium system has no solution at the given momentum."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConsistencyError(GospaceError):
    """An internal postcondition failed, e.g. a graph value is not an equilibrium."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NoConvergenceError(GospaceError):
    """An iterative search stopped before reaching its tolerance."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class DivergenceError(GospaceError):
    """An integrator produced non-finite values."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state
