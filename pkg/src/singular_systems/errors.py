"""Exception types raised by the solvers and analysis helpers."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class SolverError(RuntimeError):
    """Common base of the numerical failures below."""


class NonConvergence(SolverError):
    """An iterative method stopped before meeting its tolerance.

    ``report`` carries whatever history was collected up to that point.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class LossOfPositivity(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class ShellConstructionFailure(SolverError):
    def __init__(self, message, margins=None):
        super().__init__(message)
        self.margins = margins


class ShellEscape(SolverError):
    pass


class MonotonicityViolation(SolverError):
    pass


class InsufficientWindow(ValueError):
    pass
