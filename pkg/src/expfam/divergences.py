"""KL divergence and the identities that relate it to log-partition values.

The central relation certified throughout this package, for any
distribution ``q`` and parameters ``lam1``, ``lam2``:

    KL(q || p_lam2) - KL(q || p_lam1)
        = A(lam2) - A(lam1) + mu_q . (lam1 - lam2)

Every other operation here (three-point decomposition, ELBO, Bregman gap,
supporting hyperplane) is a rearrangement or specialization of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .family import (
    ExponentialFamily,
    as_distribution,
    log_partition,
    member,
    moment_map,
    moment_of,
)

# Identity residual tolerances scale with the magnitude of the cancelled
# terms: tol = ATOL + RTOL * (1 + |terms|).
ATOL = 1e-12
RTOL = 1e-10


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one numerical identity check.

    ``residual`` is ``lhs - rhs`` exactly as computed and ``passed`` is
    ``|residual| <= tolerance``; construction enforces that equivalence.
    """

    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool

    def __post_init__(self):
        expected = abs(self.residual) <= self.tolerance
        if self.passed != expected:
            raise ValidationError(
                "passed flag is inconsistent with residual and tolerance"
            )

    @classmethod
    def compare(cls, lhs: float, rhs: float, tolerance: float) -> "IdentityReport":
        residual = lhs - rhs
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            residual=float(residual),
            tolerance=float(tolerance),
            passed=bool(abs(residual) <= tolerance),
        )

    @classmethod
    def at_least(cls, value: float, bound: float) -> "IdentityReport":
        """Report for a one-sided check ``value >= bound``.

        The residual is the shortfall ``min(value - bound, 0)`` and the
        tolerance is 0, so ``passed`` is exactly ``value >= bound``.
        """
        residual = min(float(value) - float(bound), 0.0)
        return cls(
            lhs=float(value),
            rhs=float(bound),
            residual=residual,
            tolerance=0.0,
            passed=bool(residual == 0.0),
        )


def kl(q, p) -> float:
    """KL divergence ``sum_y q(y) log(q(y)/p(y))`` with 0 log 0 = 0.

    Terms with ``q(y) = 0`` are skipped.  If ``p`` assigns zero mass where
    ``q`` is positive the divergence is +inf (absolute-continuity failure,
    a meaningful value, not an error).  Nonnegative up to -1e-14 rounding
    slack.
    """
    q = as_distribution(q, "q")
    p = as_distribution(p, "p")
    if q.shape[0] != p.shape[0]:
        raise DimensionMismatchError(
            f"q has {q.shape[0]} entries, p has {p.shape[0]}"
        )
    mask = q > 0.0
    if np.any(p[mask] == 0.0):
        return math.inf
    qm = q[mask]
    return float(np.sum(qm * (np.log(qm) - np.log(p[mask]))))


def kl_difference_rhs(family: ExponentialFamily, q, lam1, lam2) -> float:
    """Closed-form value of ``KL(q||p_lam2) - KL(q||p_lam1)``.

    Evaluates ``A(lam2) - A(lam1) + mu_q . (lam1 - lam2)`` without forming
    either KL sum.
    """
    lam1 = family.natural_param(lam1, "lam1")
    lam2 = family.natural_param(lam2, "lam2")
    mu_q = moment_of(family, q)
    return (
        log_partition(family, lam2)
        - log_partition(family, lam1)
        + float(mu_q @ (lam1 - lam2))
    )


def kl_within_family(family: ExponentialFamily, lam1, lam2) -> float:
    """KL divergence between two members, ``KL(p_lam1 || p_lam2)``.

    Evaluated in closed form as ``A(lam2) - A(lam1) + mu_lam1 . (lam1 - lam2)``
    with no explicit probability-space sum; nonnegative up to 1e-12 slack.
    """
    lam1 = family.natural_param(lam1, "lam1")
    lam2 = family.natural_param(lam2, "lam2")
    mu1 = moment_map(family, lam1)
    return (
        log_partition(family, lam2)
        - log_partition(family, lam1)
        + float(mu1 @ (lam1 - lam2))
    )


def three_point_residual(family: ExponentialFamily, q, lam1, lam2) -> IdentityReport:
    """Certify the three-point decomposition of ``KL(q || p_lam2)``.

    lhs:  KL(q || p_lam2)
    rhs:  KL(q || p_lam1) + KL(p_lam1 || p_lam2)
          + (mu_q - mu_lam1) . (lam1 - lam2)

    When ``lam1`` moment-matches ``q`` the inner product vanishes and the
    decomposition becomes the Pythagorean equality.
    """
    lam1 = family.natural_param(lam1, "lam1")
    lam2 = family.natural_param(lam2, "lam2")
    q = family.distribution(q)
    lhs = kl(q, member(family, lam2))
    mu_q = moment_of(family, q)
    mu1 = moment_map(family, lam1)
    rhs = (
        kl(q, member(family, lam1))
        + kl_within_family(family, lam1, lam2)
        + float((mu_q - mu1) @ (lam1 - lam2))
    )
    tolerance = ATOL + RTOL * (1.0 + abs(lhs))
    return IdentityReport.compare(lhs, rhs, tolerance)


def elbo(family: ExponentialFamily, q, lam) -> tuple[float, float]:
    """Evidence lower bound and its gap at ``(q, lam)``.

    Returns ``(lam . mu_q - KL(q||a), KL(q||p_lam))``.  The two values sum
    to ``A(lam)``, so the first never exceeds ``A(lam)`` and matches it
    exactly when ``q`` is the member at ``lam``.
    """
    lam = family.natural_param(lam)
    q = family.distribution(q)
    mu_q = moment_of(family, q)
    bound = float(lam @ mu_q) - kl(q, family.base)
    gap = kl(q, member(family, lam))
    return bound, gap


def bregman(family: ExponentialFamily, lam2, lam1) -> float:
    """Bregman gap of the log partition: ``A(lam2) - A(lam1) - mu_lam1 . (lam2 - lam1)``.

    Argument order follows the Bregman convention (evaluation point first,
    tangent point second).  Equal to ``kl_within_family(lam1, lam2)`` and
    nonnegative up to rounding slack, which is the supporting-hyperplane
    property of the log partition.
    """
    lam1 = family.natural_param(lam1, "lam1")
    lam2 = family.natural_param(lam2, "lam2")
    mu1 = moment_map(family, lam1)
    return (
        log_partition(family, lam2)
        - log_partition(family, lam1)
        - float(mu1 @ (lam2 - lam1))
    )
