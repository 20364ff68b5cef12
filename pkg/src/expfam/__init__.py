"""Numerical toolkit for finite discrete exponential families.

Exact evaluators for partition functions, members, and moments; the KL
difference identity and its consequences (three-point decomposition,
Pythagorean splits, ELBO, Bregman gaps, Legendre duality); a damped-Newton
moment-matching solver powering I-projections; KL-regularized reward
maximization; and brute-force oracles that certify every identity
numerically.
"""

from .control import (
    RewardProblem,
    SweepPoint,
    beta_sweep,
    boltzmann,
    induced_family,
    objective_eval,
    regularized_value,
)
from .divergences import (
    IdentityReport,
    bregman,
    elbo,
    kl,
    kl_difference_rhs,
    kl_within_family,
    three_point_residual,
)
from .errors import (
    DimensionMismatchError,
    DocumentFormatError,
    ExpFamError,
    InfeasibleBoundaryError,
    SolveFailedError,
    ValidationError,
)
from .family import (
    ExponentialFamily,
    as_distribution,
    categorical,
    entropy,
    log_member,
    log_partition,
    lse,
    member,
    moment_map,
    moment_of,
    partition,
    softmax,
)
from .oracle import (
    VerificationSuite,
    grad_check,
    kl_direct,
    mean_preserving_peers,
    random_simplex,
)
from .projection import (
    SolveOptions,
    SolveReport,
    TraceEntry,
    Verdict,
    i_projection,
    legendre_dual,
    moment_match,
    reverse_i_projection,
)
from .verify import CheckOutcome, run_verification

__version__ = "0.1.0"

__all__ = [
    "CheckOutcome",
    "DimensionMismatchError",
    "DocumentFormatError",
    "ExpFamError",
    "ExponentialFamily",
    "IdentityReport",
    "InfeasibleBoundaryError",
    "RewardProblem",
    "SolveFailedError",
    "SolveOptions",
    "SolveReport",
    "SweepPoint",
    "TraceEntry",
    "ValidationError",
    "Verdict",
    "VerificationSuite",
    "as_distribution",
    "beta_sweep",
    "boltzmann",
    "bregman",
    "categorical",
    "elbo",
    "entropy",
    "grad_check",
    "i_projection",
    "induced_family",
    "kl",
    "kl_difference_rhs",
    "kl_direct",
    "kl_within_family",
    "legendre_dual",
    "log_member",
    "log_partition",
    "lse",
    "mean_preserving_peers",
    "member",
    "moment_map",
    "moment_match",
    "moment_of",
    "objective_eval",
    "partition",
    "random_simplex",
    "regularized_value",
    "reverse_i_projection",
    "run_verification",
    "softmax",
    "three_point_residual",
]
