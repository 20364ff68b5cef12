"""KL-regularized reward maximization over a finite outcome set.

Maximizing ``E_q[reward] - beta * KL(q || base)`` over distributions ``q``
is a one-dimensional exponential-family problem in disguise: take the
reward as the (single) statistic and ``1/beta`` as the natural parameter.
The unique maximizer is the Boltzmann distribution
``q*(y) proportional to base(y) * exp(reward(y)/beta)`` and the optimal
value is ``beta * A(1/beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .divergences import kl
from .errors import ValidationError
from .family import ExponentialFamily, _as_float_vector, log_partition, member


@dataclass(frozen=True, eq=False)
class RewardProblem:
    """A reward vector over labelled outcomes, a reference distribution,
    and a regularization temperature.

    ``beta`` trades reward against divergence from ``base``: small values
    chase the reward greedily, large values stay close to the reference.
    """

    labels: tuple[str, ...]
    base: np.ndarray
    reward: np.ndarray
    beta: float

    def __post_init__(self):
        # Reuse the family validation for labels and base.
        probe = ExponentialFamily(
            labels=self.labels, base=self.base, statistic=np.zeros((len(self.labels), 1))
        )
        reward = _as_float_vector(self.reward, "reward")
        if reward.shape[0] != probe.n_outcomes:
            raise ValidationError(
                f"reward has {reward.shape[0]} entries for {probe.n_outcomes} outcomes"
            )
        beta = float(self.beta)
        if not math.isfinite(beta) or beta <= 0.0:
            raise ValidationError(f"beta must be a positive real, got {self.beta!r}")
        reward.setflags(write=False)
        object.__setattr__(self, "labels", probe.labels)
        object.__setattr__(self, "base", probe.base)
        object.__setattr__(self, "reward", reward)
        object.__setattr__(self, "beta", beta)

    @property
    def n_outcomes(self) -> int:
        return self.base.shape[0]


@dataclass(frozen=True, eq=False)
class SweepPoint:
    beta: float
    value: float
    q_star: np.ndarray


def induced_family(problem: RewardProblem) -> ExponentialFamily:
    """The one-dimensional family whose statistic is the reward."""
    return ExponentialFamily(
        labels=problem.labels, base=problem.base, statistic=problem.reward
    )


def boltzmann(problem: RewardProblem) -> np.ndarray:
    """The maximizer ``q*(y) proportional to base(y) exp(reward(y)/beta)``.

    Computed in log space via the induced family, so extreme reward/beta
    ratios are safe; entries are strictly positive.
    """
    return member(induced_family(problem), [1.0 / problem.beta])


def regularized_value(problem: RewardProblem) -> float:
    """Optimal value ``beta * A(1/beta)`` of the regularized objective."""
    return problem.beta * log_partition(induced_family(problem), [1.0 / problem.beta])


def objective_eval(problem: RewardProblem, q) -> float:
    """``E_q[reward] - beta * KL(q || base)`` for an arbitrary ``q``."""
    fam = induced_family(problem)
    q = fam.distribution(q)
    return float(q @ problem.reward) - problem.beta * kl(q, problem.base)


def beta_sweep(problem: RewardProblem, betas) -> list[SweepPoint]:
    """Solve the problem at each temperature in ``betas``.

    As beta shrinks the optimum concentrates on the reward argmax; as it
    grows the optimum approaches the base distribution.
    """
    betas = [float(b) for b in np.atleast_1d(np.asarray(betas, dtype=float))]
    for b in betas:
        if not math.isfinite(b) or b <= 0.0:
            raise ValidationError(f"sweep temperatures must be positive, got {b!r}")
    out = []
    for b in betas:
        scoped = replace(problem, beta=b)
        out.append(
            SweepPoint(beta=b, value=regularized_value(scoped), q_star=boltzmann(scoped))
        )
    return out
