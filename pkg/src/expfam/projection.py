"""Moment matching by damped Newton, and the projections built on it.

The solver minimizes the smooth convex function

    f(lam) = A(lam) - lam . mu

whose gradient is ``moment_map(lam) - mu`` and whose Hessian is the
covariance of the statistic under the current member.  A minimizer exists
exactly when ``mu`` lies in the (relative) interior of the moment polytope;
targets on or outside the boundary send the iterates off to infinity, which
the solver reports as ``InfeasibleBoundary`` instead of a solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .divergences import kl_within_family
from .errors import InfeasibleBoundaryError, SolveFailedError
from .family import ExponentialFamily, member, moment_of

# Convergence is declared on the gradient: ||moment_map(lam) - mu||_inf
# below tol_moment * (1 + ||mu||_inf).
_HESSIAN_RIDGE = 1e-10
# Adaptive damping added to the Hessian spectrum, relative to the top
# eigenvalue.  Concentrated members collapse the covariance in some
# directions and float noise there produces garbage Newton steps; damping
# escalates when the line search rejects a direction and decays again
# after clean full steps.
_DAMP_MIN = 1e-14
_DAMP_ESCALATION = 100.0
_DAMP_DECAY = 10.0
_MAX_DAMP_ATTEMPTS = 6
_MAX_BACKTRACKS = 30
# Absolute floor on the damping level, scaled by 1 + ||mu||_inf.  The
# computed gradient carries rounding noise around 1e-15 of the moment
# scale; dividing that noise by anything smaller turns null-space
# components into a random walk of the parameter.
_NOISE_FLOOR = 1e-13
# Step-norm trust region.  A single unbounded Newton step can move scores
# by hundreds, underflowing member entries that the target still needs;
# capping the step and doubling the cap after every full capped step keeps
# the path well scaled while genuinely divergent solves still reach the
# divergence radius in a few dozen iterations.
_TRUST_INIT = 1.0

# A numerically "converged" iterate whose member piles all but this much
# mass onto outcomes whose statistic coincides with mu has diverged toward
# a zero-dimensional face: the target is a polytope vertex, not an
# interior point.
_VERTEX_MASS_TOL = 1e-8
_VERTEX_COINCIDE_TOL = 1e-12


class Verdict(Enum):
    CONVERGED = "Converged"
    INFEASIBLE_BOUNDARY = "InfeasibleBoundary"
    MAX_ITERATIONS = "MaxIterations"


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for :func:`moment_match`.

    ``tol_moment`` is scaled by ``1 + ||mu||_inf`` before use.  The solve is
    declared infeasible when ``||lam||_2`` exceeds ``divergence_radius``
    while the gradient is still above tolerance.
    """

    tol_moment: float = 1e-10
    max_iter: int = 200
    divergence_radius: float = 1e3
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    objective: float
    gradient_norm: float
    step_size: float


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of one moment-matching solve.

    ``moment_residual`` is ``||moment_map(lambda_star) - mu||_inf``, which
    is also the final gradient norm.  Trace objectives are non-increasing
    up to a few units in the last place: the line search accepts only
    descent steps until the objective flattens to rounding noise, after
    which steps may move it by a few ulp while the gradient keeps
    shrinking.
    """

    lambda_star: np.ndarray
    moment_residual: float
    objective: float
    iterations: int
    verdict: Verdict
    trace: tuple[TraceEntry, ...]

    @property
    def converged(self) -> bool:
        return self.verdict is Verdict.CONVERGED


def _state(family: ExponentialFamily, lam: np.ndarray, mu: np.ndarray):
    """Member probabilities, objective value and gradient at ``lam``."""
    scores = family.statistic @ lam
    m = float(scores.max())
    weights = family.base * np.exp(scores - m)
    total = float(weights.sum())
    p = weights / total
    log_norm = m + math.log(total)
    grad = p @ family.statistic - mu
    return p, log_norm - float(lam @ mu), grad


def _vertex_concentration(
    family: ExponentialFamily, p: np.ndarray, mu: np.ndarray
) -> bool:
    """True when ``mu`` coincides with the statistic of some outcomes and
    the member has shed essentially all mass elsewhere."""
    scale = _VERTEX_COINCIDE_TOL * (1.0 + float(np.max(np.abs(mu))))
    coincide = np.all(np.abs(family.statistic - mu[None, :]) <= scale, axis=1)
    if not coincide.any() or coincide.all():
        return False
    return float(p[~coincide].sum()) <= _VERTEX_MASS_TOL


def moment_match(
    family: ExponentialFamily, mu, options: SolveOptions | None = None
) -> SolveReport:
    """Find ``lam`` whose member has moment vector ``mu``.

    Damped Newton from ``lam = 0`` with Armijo backtracking.  The Hessian
    (statistic covariance under the current member) is inverted through
    its eigendecomposition with a small ridge plus adaptive damping, and
    steps are capped by a growing trust region; iterations whose damped
    direction still fails the line search fall back to steepest descent.
    Rank-deficient statistics are fine: the solution distribution is
    unique even when the parameter is not.

    Verdicts: ``Converged`` when the moment residual meets tolerance,
    ``InfeasibleBoundary`` when the target is detected on or outside the
    moment polytope boundary, ``MaxIterations`` otherwise.  Targets within
    roughly the tolerance of the boundary are resolution-limited and may
    land on either side.
    """
    opts = options or SolveOptions()
    mu = family.moment_vector(mu)
    d = family.dim

    tol = opts.tol_moment * (1.0 + float(np.max(np.abs(mu))))
    lam = np.zeros(d)
    radius = opts.divergence_radius  # * (1 + ||lam0||) with lam0 = 0

    # One-dimensional targets admit an exact feasibility oracle: the open
    # interval between the extreme statistic values.
    if d == 1:
        col = family.statistic[:, 0]
        lo, hi = float(col.min()), float(col.max())
        if lo < hi and not (lo < mu[0] < hi):
            p0, f0, g0 = _state(family, lam, mu)
            gnorm0 = float(np.max(np.abs(g0)))
            return SolveReport(
                lambda_star=lam,
                moment_residual=gnorm0,
                objective=f0,
                iterations=0,
                verdict=Verdict.INFEASIBLE_BOUNDARY,
                trace=(TraceEntry(0, f0, gnorm0, 0.0),),
            )

    p, f, grad = _state(family, lam, mu)
    gnorm = float(np.max(np.abs(grad)))
    trace = [TraceEntry(0, f, gnorm, 0.0)]
    iterations = 0
    damp = _DAMP_MIN
    trust = _TRUST_INIT

    def line_search(direction, slope):
        # Backtracking line search.  Armijo sufficient decrease is the
        # primary criterion; once the predicted decrease drops below the
        # floating resolution of the objective, steps that shrink the
        # gradient while moving the objective by at most a few ulp are
        # accepted instead, so terminal Newton steps are not rejected on
        # rounding noise.  The recorded trace is therefore non-increasing
        # up to a few units in the last place of the objective.
        step = opts.initial_step
        flat_slack = 16.0 * np.finfo(float).eps * (1.0 + abs(f))
        for _ in range(_MAX_BACKTRACKS):
            candidate = lam + step * direction
            p_new, f_new, grad_new = _state(family, candidate, mu)
            armijo_rhs = f + opts.armijo_c1 * step * slope
            if (f_new <= armijo_rhs and (armijo_rhs < f or f_new < f)) or (
                f_new <= f + flat_slack
                and float(np.max(np.abs(grad_new))) <= 0.9 * gnorm
            ):
                return step, (candidate, p_new, f_new, grad_new)
            step *= opts.backtrack_factor
        return None, None

    while True:
        if gnorm <= tol:
            if _vertex_concentration(family, p, mu):
                verdict = Verdict.INFEASIBLE_BOUNDARY
            else:
                verdict = Verdict.CONVERGED
            break
        if float(np.linalg.norm(lam)) > radius:
            verdict = Verdict.INFEASIBLE_BOUNDARY
            break
        if iterations >= opts.max_iter:
            verdict = Verdict.MAX_ITERATIONS
            break

        # Damped Newton direction on the covariance of the statistic.
        # The spectrum gets a small absolute ridge plus adaptive relative
        # damping; damping escalates within the iteration whenever the
        # line search rejects the direction.
        centered = family.statistic - (grad + mu)[None, :]
        hessian = (centered * p[:, None]).T @ centered
        ridge = _HESSIAN_RIDGE * float(np.trace(hessian)) / d
        try:
            evals, evecs = np.linalg.eigh(hessian)
        except np.linalg.LinAlgError:
            evals = None
        step = None
        capped = False
        if evals is not None and float(evals.max()) > 0.0:
            evals = np.maximum(evals, 0.0)
            top = float(evals.max())
            grad_eig = evecs.T @ grad
            noise_floor = _NOISE_FLOOR * (1.0 + float(np.max(np.abs(mu))))
            for _ in range(_MAX_DAMP_ATTEMPTS):
                level = max(ridge, damp * top, noise_floor)
                direction = -evecs @ (grad_eig / (evals + level))
                if not np.all(np.isfinite(direction)):
                    break
                norm = float(np.linalg.norm(direction))
                capped = norm > trust
                if capped:
                    direction = direction * (trust / norm)
                slope = float(grad @ direction)
                if slope >= 0.0:
                    break
                step, candidate_state = line_search(direction, slope)
                if step is not None:
                    if step == opts.initial_step:
                        damp = max(damp / _DAMP_DECAY, _DAMP_MIN)
                    break
                damp = min(damp * _DAMP_ESCALATION, 1.0)
        if step is None:
            # Steepest descent, scaled to the trust norm so that degenerate
            # (zero-curvature) runaway still reaches the divergence radius
            # through trust doubling.
            direction = -grad * (trust / float(np.linalg.norm(grad)))
            capped = True
            step, candidate_state = line_search(direction, float(grad @ direction))
        if step is None:
            verdict = Verdict.MAX_ITERATIONS
            break
        if capped and step == opts.initial_step:
            trust *= 2.0
        elif step < opts.initial_step:
            trust = max(1.0, step * trust if capped else trust / 2.0)

        lam, p, f, grad = candidate_state
        gnorm = float(np.max(np.abs(grad)))
        iterations += 1
        trace.append(TraceEntry(iterations, f, gnorm, step))

    lam = lam.copy()
    lam.setflags(write=False)
    return SolveReport(
        lambda_star=lam,
        moment_residual=gnorm,
        objective=f,
        iterations=iterations,
        verdict=verdict,
        trace=tuple(trace),
    )


def _require_converged(report: SolveReport, what: str) -> None:
    if report.verdict is Verdict.INFEASIBLE_BOUNDARY:
        raise InfeasibleBoundaryError(
            f"{what}: target moment lies on or outside the moment polytope boundary",
            report=report,
        )
    if report.verdict is not Verdict.CONVERGED:
        raise SolveFailedError(
            f"{what}: solver hit the iteration cap before converging",
            report=report,
        )


def i_projection(
    family: ExponentialFamily, mu, options: SolveOptions | None = None
) -> tuple[np.ndarray, SolveReport]:
    """Minimizer of ``KL(q || base)`` over distributions with moment ``mu``.

    The minimizer is the moment-matched member: the maximum-entropy
    distribution relative to the base under the moment constraint.  Raises
    :class:`InfeasibleBoundaryError` when ``mu`` is not attainable.
    """
    report = moment_match(family, mu, options)
    _require_converged(report, "i_projection")
    return member(family, report.lambda_star), report


def reverse_i_projection(
    family: ExponentialFamily, q, options: SolveOptions | None = None
) -> tuple[np.ndarray, SolveReport]:
    """Closest member of the family to ``q`` in ``KL(q || .)``.

    Characterized by moment matching: the optimum shares the moment vector
    of ``q``.  Raises :class:`InfeasibleBoundaryError` when that moment
    sits on the polytope boundary (for instance ``q`` supported on a face).
    """
    mu_q = moment_of(family, q)
    report = moment_match(family, mu_q, options)
    _require_converged(report, "reverse_i_projection")
    return member(family, report.lambda_star), report


def legendre_dual(
    family: ExponentialFamily, mu, options: SolveOptions | None = None
) -> float:
    """Convex conjugate of the log partition at ``mu``.

    Equals ``KL(p_lam* || base)`` at the moment-matched parameter, hence is
    nonnegative, and pairs with the log partition in the Fenchel identity
    ``A(lam*) + dual(mu) = lam* . mu``.
    """
    report = moment_match(family, mu, options)
    _require_converged(report, "legendre_dual")
    return kl_within_family(family, report.lambda_star, np.zeros(family.dim))
