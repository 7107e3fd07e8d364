"""Exception types raised by nlqm."""


class NLQMError(Exception):
    """Base class for all nlqm errors."""


class ContractViolation(NLQMError, ValueError):
    """Inputs break an operation's preconditions (shape, basis, sign)."""


class DegenerateInputError(ContractViolation):
    """Input is well-formed but degenerate, e.g. a zero-norm state pair."""


class ValidationError(NLQMError, ValueError):
    """A solution spec violates one of its constraints.

    ``constraint`` names the violated condition and ``residual`` carries its
    size so callers can report how far off the input was.
    """

    def __init__(self, constraint, residual, message=None):
        self.constraint = constraint
        self.residual = float(residual)
        super().__init__(message or f"{constraint} violated (residual {self.residual:.3e})")


class WrongCaseError(ContractViolation):
    """The operation does not cover this coupling regime."""


class ExistenceWindowError(ContractViolation):
    """Requested time lies outside the interval on which the solution exists."""


class IntegrationError(NLQMError, RuntimeError):
    """Numerical integration could not proceed.

    ``last_good_time`` is the last time at which the state was finite and
    accepted by the stepper.
    """

    def __init__(self, message, last_good_time):
        self.last_good_time = float(last_good_time)
        super().__init__(f"{message} (last good time t={self.last_good_time:.6g})")
