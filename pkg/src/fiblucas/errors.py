"""Exception hierarchy shared by every stage of the pipeline."""


class FibLucasError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(FibLucasError, ValueError):
    """Invalid pipeline configuration (CLI exit code 2)."""


class PrecisionExhausted(FibLucasError, ArithmeticError):
    """A certified decision could not be made at the maximum precision.

    ``operation`` names the computation that gave up and ``precision`` the
    last working precision (bits) that was tried.
    """

    def __init__(self, operation: str, precision: int, detail: str = ""):
        self.operation = operation
        self.precision = precision
        self.detail = detail
        msg = f"{operation}: undecidable at {precision} bits"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class Undecided(PrecisionExhausted):
    """Raised inside an escalation loop when the current precision is too low.

    Escaping an escalation loop it reads like any other
    :class:`PrecisionExhausted`.
    """


class InvariantViolation(FibLucasError, AssertionError):
    """An internal consistency check failed (CLI exit code 4)."""


class NonConvergence(FibLucasError, ArithmeticError):
    """Fixed-point iteration did not stabilise within its iteration cap."""
