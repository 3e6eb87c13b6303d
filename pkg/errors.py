"""
Exception hierarchy for APEX DualBounds.

Every error raised deliberately by the library derives from DualBoundError so
callers (the experiment workflow in particular) can separate expected numerical
failures from programming errors. Exceptions carry the structured context a
caller needs to report the failure (period, basis index, path index, ...).
"""


class DualBoundError(Exception):
    """Base exception for all library errors."""


class ArgumentError(DualBoundError, ValueError):
    """Raised when an operation receives an invalid argument."""


class InadmissibleActionError(DualBoundError):
    """Raised when a policy produces an action outside the admissible set.

    Attributes:
        period: Decision period n at which the violation occurred
        constraint: Name of the violated constraint
    """

    def __init__(self, message: str, period: int, constraint: str):
        super().__init__(message)
        self.period = period
        self.constraint = constraint


class SingularSystemError(DualBoundError):
    """Raised when a linear system that must be invertible is singular.

    Attributes:
        period: Recursion period where factorization failed (if any)
        monomial: Offending monomial for coordinate-weight systems (if any)
    """

    def __init__(self, message: str, period: int | None = None, monomial: str | None = None):
        super().__init__(message)
        self.period = period
        self.monomial = monomial


class RegressionError(DualBoundError):
    """Raised when a coordinate regression cannot be solved.

    Attributes:
        period: Period n of the failing regression (if known)
        index: Basis index i of the failing regression (if known)
    """

    def __init__(self, message: str, period: int | None = None, index: int | None = None):
        super().__init__(message)
        self.period = period
        self.index = index


class NonConvexProblemError(DualBoundError):
    """Raised when a QP objective matrix is not positive semi-definite.

    Attributes:
        min_eigenvalue: Smallest eigenvalue of the objective matrix
    """

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NonAffinePenaltyError(DualBoundError):
    """Raised when a penalty that is not affine in actions reaches a QP inner problem."""


class InfeasibleInnerProblemError(DualBoundError):
    """Raised when a pathwise inner problem has no feasible action sequence.

    Attributes:
        path_index: Index of the upper-bound sample path
    """

    def __init__(self, message: str, path_index: int):
        super().__init__(message)
        self.path_index = path_index


class UnconvergedInnerProblemError(DualBoundError):
    """Raised when pathwise inner problems stop at the QP iteration cap.

    Attributes:
        path_index: First unconverged upper-bound sample path
        count: Number of unconverged paths
    """

    def __init__(self, message: str, path_index: int, count: int):
        super().__init__(message)
        self.path_index = path_index
        self.count = count


class AnticipativePolicyError(ArgumentError):
    """Raised when a feasibility check is requested for an anticipative policy."""


class ConfigError(DualBoundError):
    """Raised when an experiment configuration fails validation.

    Attributes:
        field_paths: Dotted paths of the offending fields
    """

    def __init__(self, message: str, field_paths: list[str] | None = None):
        super().__init__(message)
        self.field_paths = field_paths or []


class RankDeficiencyWarning(UserWarning):
    """Emitted when a least-squares design matrix is rank deficient."""
