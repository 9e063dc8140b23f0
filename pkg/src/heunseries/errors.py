"""Exception hierarchy.

Every error raised by the library derives from :class:`HeunError`. The CLI
maps :class:`ValidationError` subclasses to exit code 2 and
:class:`ComputationError` subclasses to exit code 3.
"""


class HeunError(Exception):
    """Base class for all library errors."""


class ValidationError(HeunError, ValueError):
    """Bad input: the request itself is malformed."""


class ComputationError(HeunError, ArithmeticError):
    """The method is inapplicable or broke down for these inputs."""


class FuchsianViolation(ValidationError):
    pass


class SingularA(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class WrongGamma0(ValidationError):
    pass


class ComplexExponents(ComputationError):
    pass


class PoleAtC(ComputationError):
    pass


class NoConvergence(ComputationError):
    pass


class DivisionByZero(ComputationError, ZeroDivisionError):
    pass


class RecurrenceBreakdown(ComputationError):
    """Some ``R_n`` vanished before the sequence terminated."""

    def __init__(self, n: int, message: str | None = None):
        self.n = n
        super().__init__(message or f"recurrence breaks down at n={n} (R_n = 0)")


class ZeroDenominator(ComputationError):
    """An intermediate continued-fraction denominator vanished."""

    def __init__(self, depth: int, message: str | None = None):
        self.depth = depth
        super().__init__(message or f"continued fraction denominator vanishes at depth {depth}")


class NotTerminated(ComputationError):
    pass


class StepFailure(ComputationError):
    pass
