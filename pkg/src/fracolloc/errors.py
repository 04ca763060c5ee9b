"""Exception hierarchy shared by all modules."""


class FracCollocError(Exception):
    """Base class for every error raised by :mod:`fracolloc`."""


class ParameterError(FracCollocError, ValueError):
    """Invalid input parameter (out-of-range order, degree, grid size...)."""


class DomainError(ParameterError):
    """Evaluation requested at a point where the quantity is singular or undefined."""


class NumericalError(FracCollocError, ArithmeticError):
    """A numerical procedure failed (singular matrix, degenerate node...)."""


class SingularMatrixError(NumericalError):
    pass


class BracketingError(NumericalError):
    """A polynomial root search did not find the expected number of roots."""


class InterlacingError(BracketingError):
    """A bracket expected to hold exactly one zero shows no sign change."""

    def __init__(self, message, brackets=()):
        super().__init__(message)
        self.brackets = list(brackets)


class BlowUpError(BracketingError):
    """The mixed collocation condition does not admit the expected number of roots.

    ``trace`` holds the panels ``(left, right)`` where a sign change was seen.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class ToleranceError(NumericalError):
    """An iterative procedure did not reach its tolerance; ``best`` is the last estimate."""

    def __init__(self, message, best=float("nan")):
        super().__init__(message)
        self.best = best
