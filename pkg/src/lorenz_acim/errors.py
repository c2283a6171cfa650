"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``name`` used by the CLI when
reporting failures.
"""


class LorenzError(Exception):
    """Base class for all library errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class ConstraintViolation(LorenzError, ValueError):
    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        msg = f"{constraint} violated"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class AmbiguousCritical(LorenzError, ValueError):
    """A point equal to the critical point was given without a side."""


class CriticalHit(LorenzError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"orbit hit the critical point at step {index}")


class NotHomeomorphism(LorenzError, ValueError):
    pass


class DegenerateSlope(LorenzError, ValueError):
    pass


class BoundaryAmbiguous(LorenzError):
    """Float inputs too close to ac + b(1-c) = 1 to classify safely."""


class IndeterminateRationality(BoundaryAmbiguous):
    pass


class PreconditionViolation(LorenzError, ValueError):
    pass


class VerificationFailed(LorenzError):
    pass


class UniquenessViolated(LorenzError):
    pass


class NoneFound(LorenzError):
    pass


class NotRenormalizable(LorenzError):
    pass


class NotApplicable(LorenzError):
    pass


class AsymmetricRenormalization(LorenzError):
    pass


class BreakpointBudgetExceeded(LorenzError):
    pass


class NoConvergence(LorenzError):
    def __init__(self, max_iter: int):
        self.max_iter = max_iter
        super().__init__(f"no convergence within {max_iter} iterations")


class DegenerateEndpoints(LorenzError):
    pass


class InvalidParams(LorenzError, ValueError):
    pass
