"""Exception types shared across the package."""


class RRError(Exception):
    """Base class for all package errors."""


class InvalidInput(RRError, ValueError):
    """Input data violates a documented precondition."""


class SingularMatrixError(RRError, ArithmeticError):
    pass


class IncompatibleCongruences(RRError, ValueError):
    """Two residues disagree modulo the gcd of their moduli."""


class DrawFailed(RRError):
    """A single randomized attempt hit a bad value; the caller may resample."""

    def __init__(self, reason: str, kind: str = "generic"):
        super().__init__(reason)
        self.kind = kind


class RetriesExhausted(RRError):
    def __init__(self, routine: str, tries: int, last: str | None = None):
        msg = f"{routine}: all {tries} attempts failed"
        if last:
            msg += f" (last: {last})"
        super().__init__(msg)
        self.routine = routine
        self.tries = tries


class ZerosAtInfinity(RRError):
    """The interpolating polynomial meets the curve on the line at infinity."""


class AssumptionViolated(RRError):
    """The curve or divisor data breaks an input assumption of the pipeline."""


class NotNodal(AssumptionViolated):
    pass
