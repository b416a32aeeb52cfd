"""Multi-precision laboratory for the Airy solutions of Painlevé II.

Three independent evaluation routes for the same family of special-function
solutions: Hankel tau-function determinants built on an entire-series Airy
kernel, the Bäcklund recursion in the parameter, and the recurrence
coefficients of monic orthogonal polynomials for the cubic ensemble. The
curve module carries their common scaling limit on the spectral curve
x^3 - x t - 1 = 0, the atlas maps pole/zero fields and monotonicity, and
verify cross-checks everything against everything.
"""

from .errors import (
    AtPoleError,
    BacklundSingularityError,
    ExceptionalPointError,
    InsufficientPrecisionError,
    InternalConsistencyError,
    P2AiryError,
    PartitionZeroError,
    PathNearBranchPointError,
    PVanishesError,
    SingularityError,
    UsageError,
)
from .precision import PrecCtx, ctx_for_order, default_digits, workdps
from .mpkernel import AiryJet, SeedSpec, airy_pair, rotate_lambda_identity, seed_jet
from .tau import SolutionJet, TauMinor, qps_from_tau, tau_derivative, tau_family, tau_minor
from .backlund import (
    QJet,
    backlund_chain,
    backlund_step,
    hamiltonian_value,
    q1_jet,
    reflect,
    residual_p2,
    residual_p34,
    residual_s2,
    s2_chain,
)
from .cubic import (
    CoeffRecord,
    CoeffSequence,
    MomentTable,
    beta_difference_residual,
    bridge_theorem,
    coeffs,
    der_hn_residual,
    der_lnD_residual,
    der_pn_residual,
    dtau_relation_check,
    hankel_D,
    hn_sign,
    integral_identity_residual,
    moment,
    moment_table,
    partition_free_energy,
    rotation_check,
    scale_relation_check,
    string_residuals,
)
from .curve import (
    Branch,
    branch,
    branch_points,
    qd_geometry,
    qd_geometry_full,
    rotation_residual,
    scaling_error,
    trace_loop,
    x_branch,
    x_derivative,
)
from .atlas import (
    PoleZeroEntry,
    PoleZeroReport,
    SweepRecord,
    SweepReport,
    airy_first_zero,
    default_sweep_grid,
    monotonicity_sweep,
    pole_zero_scan,
)
from .verify import CheckResult, DEFAULT_SUITES, SUITES, run_suites

__all__ = [
    "AiryJet",
    "AtPoleError",
    "BacklundSingularityError",
    "Branch",
    "CheckResult",
    "CoeffRecord",
    "CoeffSequence",
    "DEFAULT_SUITES",
    "ExceptionalPointError",
    "InsufficientPrecisionError",
    "InternalConsistencyError",
    "MomentTable",
    "P2AiryError",
    "PartitionZeroError",
    "PathNearBranchPointError",
    "PoleZeroEntry",
    "PoleZeroReport",
    "PrecCtx",
    "PVanishesError",
    "QJet",
    "SUITES",
    "SeedSpec",
    "SingularityError",
    "SolutionJet",
    "SweepRecord",
    "SweepReport",
    "TauMinor",
    "UsageError",
    "airy_first_zero",
    "airy_pair",
    "backlund_chain",
    "backlund_step",
    "beta_difference_residual",
    "branch",
    "branch_points",
    "bridge_theorem",
    "coeffs",
    "ctx_for_order",
    "default_digits",
    "default_sweep_grid",
    "der_hn_residual",
    "der_lnD_residual",
    "der_pn_residual",
    "dtau_relation_check",
    "hamiltonian_value",
    "hankel_D",
    "hn_sign",
    "integral_identity_residual",
    "moment",
    "moment_table",
    "monotonicity_sweep",
    "partition_free_energy",
    "pole_zero_scan",
    "q1_jet",
    "qd_geometry",
    "qd_geometry_full",
    "qps_from_tau",
    "reflect",
    "residual_p2",
    "residual_p34",
    "residual_s2",
    "rotate_lambda_identity",
    "rotation_check",
    "rotation_residual",
    "run_suites",
    "s2_chain",
    "scale_relation_check",
    "scaling_error",
    "seed_jet",
    "string_residuals",
    "tau_derivative",
    "tau_family",
    "tau_minor",
    "trace_loop",
    "workdps",
    "x_branch",
    "x_derivative",
]
