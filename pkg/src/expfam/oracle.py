"""Independent brute-force verifiers.

Everything here is deliberately naive: plain probability-space sums,
central finite differences, and rejection-free simplex sampling.  These
routines share no evaluation path with the main modules, so agreement
between the two is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .family import ExponentialFamily, as_distribution, log_partition, member, moment_map


def kl_direct(q, p) -> float:
    """KL divergence by plain summation in probability space.

    Term-by-term Python loop, no log-space tricks.  Kept independent of
    ``divergences.kl`` on purpose; their agreement is itself a test.
    """
    q = as_distribution(q, "q")
    p = as_distribution(p, "p")
    if q.shape[0] != p.shape[0]:
        raise DimensionMismatchError(
            f"q has {q.shape[0]} entries, p has {p.shape[0]}"
        )
    total = 0.0
    for qi, pi in zip(q.tolist(), p.tolist()):
        if qi > 0.0:
            if pi == 0.0:
                return math.inf
            total += qi * math.log(qi / pi)
    return total


def grad_check(family: ExponentialFamily, lam) -> float:
    """Max relative error between the moment map and central differences
    of the log partition.

    Per-coordinate step ``h_j = 1e-5 * (1 + |lam_j|)``; the relative error
    in coordinate ``j`` is ``|fd_j - mu_j| / (1 + |mu_j|)``.  Expected to
    stay below 1e-6 for desk-scale families.
    """
    lam = family.natural_param(lam)
    mu = moment_map(family, lam)
    worst = 0.0
    for j in range(family.dim):
        h = 1e-5 * (1.0 + abs(lam[j]))
        bump = np.zeros_like(lam)
        bump[j] = h
        fd = (log_partition(family, lam + bump) - log_partition(family, lam - bump)) / (
            2.0 * h
        )
        err = abs(fd - mu[j]) / (1.0 + abs(mu[j]))
        worst = max(worst, err)
    return worst


def random_simplex(n: int, count: int, seed) -> list[np.ndarray]:
    """Sample ``count`` points of the ``n``-simplex by exponential spacing.

    Each point is ``e / sum(e)`` for ``n`` independent standard-exponential
    variates; deterministic for a fixed seed.
    """
    if n < 1:
        raise ValidationError("simplex dimension must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(max(count, 0)):
        e = rng.standard_exponential(n)
        out.append(e / e.sum())
    return out


def mean_preserving_peers(
    family: ExponentialFamily, lam_star, count: int, seed
) -> list[np.ndarray]:
    """Distributions sharing the member's moment vector.

    Starting from ``p = member(lam_star)``, adds random directions from the
    null space of the stacked constraint matrix [statistic^T; 1^T], scaled
    to at most half the smallest entry of ``p`` so every output stays in
    the open simplex.  If the null space is trivial the moment slice is the
    single point ``p`` and only it is returned.
    """
    lam_star = family.natural_param(lam_star, "lam_star")
    p = member(family, lam_star)
    if count <= 0:
        return []

    constraints = np.vstack([family.statistic.T, np.ones((1, family.n_outcomes))])
    u, s, vh = np.linalg.svd(constraints)
    cutoff = (s.max() if s.size else 0.0) * max(constraints.shape) * np.finfo(float).eps
    rank = int(np.sum(s > cutoff))
    basis = vh[rank:].T  # columns span the null space
    if basis.shape[1] == 0:
        return [p.copy()]

    rng = np.random.default_rng(seed)
    cap = 0.5 * float(p.min())
    out = []
    while len(out) < count:
        z = rng.standard_normal(basis.shape[1])
        direction = basis @ z
        peak = float(np.max(np.abs(direction)))
        if peak == 0.0:
            continue
        amplitude = cap * rng.uniform(0.1, 1.0) / peak
        out.append(p + amplitude * direction)
    return out


def _default_counts() -> dict[str, int]:
    from .verify import CHECK_NAMES

    return {name: 20 for name in CHECK_NAMES}


def _default_tolerances() -> dict[str, tuple[float, float]]:
    from .verify import DEFAULT_TOLERANCES

    return dict(DEFAULT_TOLERANCES)


@dataclass(frozen=True)
class VerificationSuite:
    """Configuration for a full identity-verification run.

    ``instance_counts`` maps check name to the number of random instances;
    ``tolerances`` maps check name to ``(atol, rtol)``.  Checks missing
    from either map fall back to package defaults.
    """

    seed: int = 0
    instance_counts: Mapping[str, int] = field(default_factory=_default_counts)
    tolerances: Mapping[str, tuple[float, float]] = field(
        default_factory=_default_tolerances
    )

    def __post_init__(self):
        for name, count in self.instance_counts.items():
            if count < 1:
                raise ValidationError(f"instance count for {name!r} must be >= 1")
        for name, (atol, rtol) in self.tolerances.items():
            if atol <= 0.0 or rtol <= 0.0:
                raise ValidationError(f"tolerances for {name!r} must be positive")
