"""Numerical certificates for every identity the package implements.

Each check draws random instances (distributions and parameter pairs) for
a given family, evaluates one identity with the closed-form machinery on
one side and the brute-force oracles on the other, and reports the
residual.  The CLI ``verify`` command and the acceptance tests both drive
this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divergences import IdentityReport, bregman, elbo, kl_difference_rhs, kl_within_family, three_point_residual
from .family import ExponentialFamily, log_partition, member, moment_map, moment_of
from .oracle import VerificationSuite, grad_check, kl_direct, mean_preserving_peers
from .projection import SolveOptions, moment_match

# Solver-backed checks run the solve tighter than the residuals they
# certify, so solver error never dominates an identity residual.
_TIGHT_SOLVE = SolveOptions(tol_moment=1e-13)

DEFAULT_TOLERANCES: dict[str, tuple[float, float]] = {
    "kl_difference": (1e-12, 1e-10),
    "within_family_kl": (1e-12, 1e-10),
    "three_point": (1e-12, 1e-10),
    "pythagorean": (1e-10, 1e-10),
    "i_projection_decomposition": (1e-10, 1e-10),
    "elbo_decomposition": (1e-12, 1e-10),
    "supporting_hyperplane": (1e-12, 1e-10),
    "legendre_dual": (1e-10, 1e-10),
    "bregman": (1e-12, 1e-10),
    "gradient_of_log_partition": (1e-6, 1e-10),
}

CHECK_NAMES = tuple(sorted(DEFAULT_TOLERANCES))


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    instance: int
    detail: str
    report: IdentityReport


def _random_q(rng, n: int) -> np.ndarray:
    e = rng.standard_exponential(n)
    return e / e.sum()


def _random_lam(rng, d: int, bound: float = 3.0) -> np.ndarray:
    return rng.uniform(-bound, bound, d)


def _check_kl_difference(family, rng, atol, rtol):
    q = _random_q(rng, family.n_outcomes)
    lam1 = _random_lam(rng, family.dim)
    lam2 = _random_lam(rng, family.dim)
    kl2 = kl_direct(q, member(family, lam2))
    kl1 = kl_direct(q, member(family, lam1))
    rhs = kl_difference_rhs(family, q, lam1, lam2)
    tol = atol + rtol * (1.0 + abs(kl2) + abs(kl1))
    return [("difference", IdentityReport.compare(kl2 - kl1, rhs, tol))]


def _check_within_family_kl(family, rng, atol, rtol):
    lam1 = _random_lam(rng, family.dim)
    lam2 = _random_lam(rng, family.dim)
    lhs = kl_direct(member(family, lam1), member(family, lam2))
    rhs = kl_within_family(family, lam1, lam2)
    tol = atol + rtol * (1.0 + abs(lhs) + abs(rhs))
    return [("closed_form", IdentityReport.compare(lhs, rhs, tol))]


def _check_three_point(family, rng, atol, rtol):
    q = _random_q(rng, family.n_outcomes)
    lam1 = _random_lam(rng, family.dim)
    lam2 = _random_lam(rng, family.dim)
    p1 = member(family, lam1)
    p2 = member(family, lam2)
    lhs = kl_direct(q, p2)
    inner = float((moment_of(family, q) - moment_map(family, lam1)) @ (lam1 - lam2))
    rhs = kl_direct(q, p1) + kl_direct(p1, p2) + inner
    tol = atol + rtol * (1.0 + abs(lhs) + abs(rhs))
    out = [("oracle_sum", IdentityReport.compare(lhs, rhs, tol))]
    out.append(("operation", three_point_residual(family, q, lam1, lam2)))
    return out


def _check_pythagorean(family, rng, atol, rtol):
    # Moment-match lam1 to a random q; the mixed term then vanishes for
    # every lam2 and the divergence splits additively.
    q = _random_q(rng, family.n_outcomes)
    lam2 = _random_lam(rng, family.dim)
    report = moment_match(family, moment_of(family, q), _TIGHT_SOLVE)
    p_star = member(family, report.lambda_star)
    p2 = member(family, lam2)
    lhs = kl_direct(q, p2)
    rhs = kl_direct(q, p_star) + kl_direct(p_star, p2)
    tol = atol + rtol * (1.0 + abs(lhs) + abs(rhs))
    return [
        ("solver_converged", IdentityReport.at_least(float(report.converged), 1.0)),
        ("decomposition", IdentityReport.compare(lhs, rhs, tol)),
        ("optimal", IdentityReport.at_least(lhs - kl_direct(q, p_star), -1e-10)),
    ]


def _check_i_projection_decomposition(family, rng, atol, rtol):
    lam0 = _random_lam(rng, family.dim, bound=2.0)
    mu = moment_map(family, lam0)
    report = moment_match(family, mu, _TIGHT_SOLVE)
    p_star = member(family, report.lambda_star)
    kl_star = kl_direct(p_star, family.base)
    peers = mean_preserving_peers(
        family, report.lambda_star, count=3, seed=int(rng.integers(2**63))
    )
    out = [("solver_converged", IdentityReport.at_least(float(report.converged), 1.0))]
    for j, peer in enumerate(peers):
        lhs = kl_direct(peer, family.base)
        rhs = kl_direct(peer, p_star) + kl_star
        tol = atol + rtol * (1.0 + abs(lhs) + abs(rhs))
        out.append((f"peer{j}_decomposition", IdentityReport.compare(lhs, rhs, tol)))
        out.append((f"peer{j}_not_better", IdentityReport.at_least(lhs - kl_star, -1e-10)))
    return out


def _check_elbo_decomposition(family, rng, atol, rtol):
    q = _random_q(rng, family.n_outcomes)
    lam = _random_lam(rng, family.dim)
    log_norm = log_partition(family, lam)
    bound, gap = elbo(family, q, lam)
    oracle_bound = float(lam @ moment_of(family, q)) - kl_direct(q, family.base)
    oracle_gap = kl_direct(q, member(family, lam))
    tol = atol + rtol * (1.0 + abs(log_norm) + abs(oracle_bound) + abs(oracle_gap))
    return [
        ("oracle_sum", IdentityReport.compare(oracle_bound + oracle_gap, log_norm, tol)),
        ("operation_sum", IdentityReport.compare(bound + gap, log_norm, tol)),
        ("gibbs_bound", IdentityReport.at_least(log_norm - bound, -1e-12)),
    ]


def _check_supporting_hyperplane(family, rng, atol, rtol):
    lam1 = _random_lam(rng, family.dim)
    lam2 = _random_lam(rng, family.dim)
    gap = bregman(family, lam2, lam1)
    p1 = member(family, lam1)
    p2 = member(family, lam2)
    tol = atol + rtol * (1.0 + abs(gap))
    out = [
        ("nonnegative", IdentityReport.at_least(gap, -1e-12)),
        ("equals_kl", IdentityReport.compare(gap, kl_direct(p1, p2), tol)),
    ]
    variation = 0.5 * float(np.sum(np.abs(p1 - p2)))
    if variation > 1e-8:
        out.append(("strict_when_distinct", IdentityReport.at_least(gap, 1e-10)))
    return out


def _check_legendre_dual(family, rng, atol, rtol):
    lam0 = _random_lam(rng, family.dim, bound=2.0)
    mu = moment_map(family, lam0)
    report = moment_match(family, mu, _TIGHT_SOLVE)
    lam_star = report.lambda_star
    dual = kl_within_family(family, lam_star, np.zeros(family.dim))
    p_star = member(family, lam_star)
    out = [
        ("solver_converged", IdentityReport.at_least(float(report.converged), 1.0)),
        ("nonnegative", IdentityReport.at_least(dual, -1e-12)),
        (
            "equals_kl_to_base",
            IdentityReport.compare(
                dual,
                kl_direct(p_star, family.base),
                atol + rtol * (1.0 + abs(dual)),
            ),
        ),
        (
            "fenchel_equality",
            IdentityReport.compare(
                log_partition(family, lam_star) + dual,
                float(lam_star @ mu),
                atol + rtol * (1.0 + abs(float(lam_star @ mu))),
            ),
        ),
    ]
    worst = np.inf
    for _ in range(5):
        probe = _random_lam(rng, family.dim)
        slack = log_partition(family, probe) + dual - float(probe @ mu)
        worst = min(worst, slack)
    out.append(("fenchel_inequality", IdentityReport.at_least(worst, -1e-12)))
    return out


def _check_bregman(family, rng, atol, rtol):
    lam1 = _random_lam(rng, family.dim)
    lam2 = _random_lam(rng, family.dim)
    gap = bregman(family, lam2, lam1)
    lhs = kl_direct(member(family, lam1), member(family, lam2))
    tol = atol + rtol * (1.0 + abs(lhs) + abs(gap))
    return [
        ("equals_kl", IdentityReport.compare(lhs, gap, tol)),
        (
            "equals_within_family",
            IdentityReport.compare(gap, kl_within_family(family, lam1, lam2), 1e-12),
        ),
    ]


def _check_gradient_of_log_partition(family, rng, atol, rtol):
    lam = _random_lam(rng, family.dim)
    return [("max_rel_error", IdentityReport.compare(grad_check(family, lam), 0.0, atol))]


_REGISTRY = {
    "kl_difference": _check_kl_difference,
    "within_family_kl": _check_within_family_kl,
    "three_point": _check_three_point,
    "pythagorean": _check_pythagorean,
    "i_projection_decomposition": _check_i_projection_decomposition,
    "elbo_decomposition": _check_elbo_decomposition,
    "supporting_hyperplane": _check_supporting_hyperplane,
    "legendre_dual": _check_legendre_dual,
    "bregman": _check_bregman,
    "gradient_of_log_partition": _check_gradient_of_log_partition,
}


def run_verification(
    family: ExponentialFamily, suite: VerificationSuite | None = None
) -> list[CheckOutcome]:
    """Run every check in the suite against one family.

    Deterministic for a fixed seed; outcomes are sorted by check name,
    instance index, then detail label.
    """
    suite = suite or VerificationSuite()
    outcomes: list[CheckOutcome] = []
    for position, name in enumerate(CHECK_NAMES):
        count = int(suite.instance_counts.get(name, 20))
        atol, rtol = suite.tolerances.get(name, DEFAULT_TOLERANCES[name])
        rng = np.random.default_rng([suite.seed, position])
        for index in range(count):
            for detail, report in _REGISTRY[name](family, rng, atol, rtol):
                outcomes.append(CheckOutcome(name, index, detail, report))
    outcomes.sort(key=lambda o: (o.check, o.instance, o.detail))
    return outcomes
