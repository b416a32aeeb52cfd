"""Exception taxonomy shared by every layer.

Each class carries the process exit code the command line front end maps it
to: 1 usage, 2 mathematical singularity (poles, vanishing denominators,
exceptional points), 3 precision exhaustion, 4 internal inconsistency.
"""


class P2AiryError(Exception):
    exit_code = 4


class UsageError(P2AiryError):
    """Bad invocation: malformed tokens, out-of-range parameters."""

    exit_code = 1


class SingularityError(P2AiryError):
    """Base for recoverable mathematical singularities."""

    exit_code = 2

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class AtPoleError(SingularityError):
    """A tau factor vanishes to precision: the solution has a pole here."""


class BacklundSingularityError(SingularityError):
    """The recursion denominator 2q^2+2q'+z vanishes to precision."""


class ExceptionalPointError(SingularityError):
    """A Hankel determinant vanishes: orthogonal polynomial degenerates."""


class PVanishesError(SingularityError):
    """p = 0 to precision, so the P_XXXIV residual cannot be formed."""


class PartitionZeroError(SingularityError):
    """Z_N = 0 to precision."""


class PathNearBranchPointError(SingularityError):
    """Root continuation ran into a collision with another sheet."""

    def __init__(self, message, branch_point=None):
        super().__init__(message, location=branch_point)
        self.branch_point = branch_point


class InsufficientPrecisionError(P2AiryError):
    """Result indistinguishable from elimination noise at this precision."""

    exit_code = 3

    def __init__(self, message, suggested_digits=None):
        super().__init__(message)
        self.suggested_digits = suggested_digits


class InternalConsistencyError(P2AiryError):
    """Self-check failure (precision doubling disagreement, lost invariants)."""

    exit_code = 4
