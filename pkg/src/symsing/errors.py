"""Exception types raised across the package."""


class GuardError(ValueError):
    """Input is well typed but outside a documented resource guard.

    Raised before any heavy work starts, so a caller that trips a guard
    loses no time and can tighten its parameters.
    """


class RejectionSamplingError(RuntimeError):
    """Rejection sampling exhausted its attempt budget.

    Carries the number of attempts made; the caller chose a parameter
    regime in which acceptable draws are too rare.
    """

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts
