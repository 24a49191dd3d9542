"""Exception hierarchy shared by all modules."""


class GenFresnelError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GenFresnelError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole.

    ``report`` carries the :class:`~genfresnel.fresnel.PoleReport` when the
    pole is one of the generalized Fresnel integral, and ``location`` the
    offending argument.
    """

    def __init__(self, message, location=None, report=None):
        super().__init__(message)
        self.location = location
        self.report = report


class PreconditionError(DomainError):
    """A stated precondition (e.g. ``N + 1 > p``) does not hold."""


class SingularMatrixError(DomainError):
    pass


class CapExceededError(DomainError):
    pass


class GammaOverflowError(GenFresnelError, OverflowError):
    pass


class ConvergenceError(GenFresnelError, ArithmeticError):
    """Numerical non-convergence: quadrature budget or extrapolation failure."""

    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome


class NoiseFloorError(ConvergenceError):
    """A slope fit used values sitting at the quadrature noise floor."""

    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit
