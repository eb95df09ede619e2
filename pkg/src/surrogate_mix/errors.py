"""Exception hierarchy shared by every module."""


class SurrogateMixError(Exception):
    """Base class for all package errors."""


class InvalidConfig(SurrogateMixError, ValueError):
    """A constructor invariant was violated.

    ``field`` names the offending attribute so front ends can report it.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidRegime(InvalidConfig):
    """High-dimensional spec outside delta + delta_s > 1."""


class SingularHessian(InvalidConfig):
    """Curvature matrix is not strictly positive definite."""


class EmptyDataset(SurrogateMixError, ValueError):
    pass


class DimMismatch(SurrogateMixError, ValueError):
    pass


class BadWeight(EmptyDataset):
    """A sample-free side was given non-zero weight."""


class BadLabels(SurrogateMixError, ValueError):
    pass


class SingularSystem(SurrogateMixError, ArithmeticError):
    pass


class ZeroEigenvalue(SurrogateMixError, ArithmeticError):
    pass


class PenaltyTooWeak(SurrogateMixError, ValueError):
    pass


class TooFewPoints(SurrogateMixError, ValueError):
    pass


class NotUnitNorm(SurrogateMixError, ValueError):
    pass


class TaskMismatch(SurrogateMixError, ValueError):
    pass


class NotConverged(SurrogateMixError, ArithmeticError):
    """An iterative solver stopped before meeting its tolerance.

    Attributes:
        iterate: last iterate (array or scalar), when meaningful.
        residual: size of the unmet stopping criterion (gradient norm,
            equation residual or simplex diameter).
    """

    def __init__(self, message, iterate=None, residual=float("nan")):
        self.iterate = iterate
        self.residual = residual
        super().__init__(f"{message} (residual={residual:.3e})")


class ExperimentError(SurrogateMixError, RuntimeError):
    """A replicate failed and its cell was aborted."""
