"""Finite discrete exponential families and their basic evaluators.

A family is determined by a finite support, a strictly positive base
distribution ``a`` over it, and a statistic matrix whose row ``y`` is the
feature vector of outcome ``y``.  Members are ``p(y) = a(y) exp(lam . phi(y)) / Z``.

All evaluators work in log space: exponentials are taken only after
subtracting the maximum score, so parameters with scores up to ~700 in
magnitude are safe.  Probabilities are materialized on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError

# |sum(base) - 1| beyond this is an input error; below it the base is
# renormalized (rounding noise vs malformed input).
_BASE_SUM_SLACK = 1e-9

# Probability vectors must sum to 1 within this tolerance.
_DIST_SUM_TOL = 1e-12


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(
            f"{name} must be a one-dimensional vector, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must contain only finite values")
    return arr


def as_distribution(values, name: str = "q") -> np.ndarray:
    """Validate a probability vector: entries in [0, 1], summing to 1.

    Returns the validated vector as a float array.  Raises
    :class:`ValidationError` if any entry is negative, any entry exceeds 1,
    or the sum deviates from 1 by more than 1e-12.
    """
    arr = _as_float_vector(values, name)
    if arr.size == 0:
        raise ValidationError(f"{name} must have at least one entry")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValidationError(f"{name} entries must lie in [0, 1]")
    total = float(arr.sum())
    if abs(total - 1.0) > _DIST_SUM_TOL:
        raise ValidationError(
            f"{name} must sum to 1 within {_DIST_SUM_TOL:g}; got sum {total!r}"
        )
    return arr


@dataclass(frozen=True, eq=False)
class ExponentialFamily:
    """A finite-support exponential family.

    Parameters
    ----------
    labels : sequence of str
        Names of the ``n`` outcomes.
    base : array_like, shape (n,)
        Strictly positive base distribution.  A sum within 1e-9 of 1 is
        renormalized; a larger deviation is rejected.
    statistic : array_like, shape (n, d)
        Row ``y`` is the statistic vector of outcome ``y``.  A flat vector
        is accepted as a single-column matrix.

    Instances are immutable after construction; the stored arrays are
    marked read-only, so a family can be shared freely across threads.
    """

    labels: tuple[str, ...]
    base: np.ndarray
    statistic: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if len(labels) == 0:
            raise ValidationError("support must contain at least one outcome")

        base = _as_float_vector(self.base, "base")
        if base.shape[0] != len(labels):
            raise ValidationError(
                f"base has {base.shape[0]} entries for {len(labels)} labels"
            )
        if np.any(base <= 0.0):
            raise ValidationError("base entries must be strictly positive")
        total = float(base.sum())
        if abs(total - 1.0) > _BASE_SUM_SLACK:
            raise ValidationError(
                f"base must sum to 1 within {_BASE_SUM_SLACK:g}; got sum {total!r}"
            )
        base = base / total

        stat = np.asarray(self.statistic, dtype=float)
        if stat.ndim == 1:
            stat = stat.reshape(-1, 1)
        if stat.ndim != 2:
            raise ValidationError(
                f"statistic must be a matrix, got {stat.ndim} dimensions"
            )
        if stat.shape[0] != len(labels):
            raise ValidationError(
                f"statistic has {stat.shape[0]} rows for {len(labels)} labels"
            )
        if stat.shape[1] < 1:
            raise ValidationError("statistic must have at least one column")
        if not np.all(np.isfinite(stat)):
            raise ValidationError("statistic entries must be finite")

        log_base = np.log(base)
        for arr in (base, stat, log_base):
            arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "statistic", stat)
        object.__setattr__(self, "_log_base", log_base)

    @property
    def n_outcomes(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.statistic.shape[1]

    @property
    def log_base(self) -> np.ndarray:
        return self._log_base

    def natural_param(self, values, name: str = "lam") -> np.ndarray:
        """Validate a natural parameter vector against this family."""
        arr = _as_float_vector(values, name)
        if arr.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"{name} has length {arr.shape[0]}, family dimension is {self.dim}"
            )
        return arr

    def moment_vector(self, values, name: str = "mu") -> np.ndarray:
        """Validate a moment vector against this family."""
        arr = _as_float_vector(values, name)
        if arr.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"{name} has length {arr.shape[0]}, family dimension is {self.dim}"
            )
        return arr

    def distribution(self, values, name: str = "q") -> np.ndarray:
        """Validate a probability vector over this family's support."""
        arr = as_distribution(values, name)
        if arr.shape[0] != self.n_outcomes:
            raise DimensionMismatchError(
                f"{name} has {arr.shape[0]} entries, support size is {self.n_outcomes}"
            )
        return arr


def categorical(outcomes, base=None) -> ExponentialFamily:
    """Build the categorical family: statistic rows are standard basis vectors.

    ``outcomes`` is either an integer count (labels become "0".."k-1") or a
    sequence of labels.  ``base`` defaults to uniform.  Members of this
    family are softmax distributions reweighted by the base.
    """
    if isinstance(outcomes, (int, np.integer)):
        labels = tuple(str(i) for i in range(int(outcomes)))
    else:
        labels = tuple(str(x) for x in outcomes)
    k = len(labels)
    if k < 1:
        raise ValidationError("categorical family needs at least one outcome")
    if base is None:
        base = np.full(k, 1.0 / k)
    return ExponentialFamily(labels=labels, base=base, statistic=np.eye(k))


def log_partition(family: ExponentialFamily, lam) -> float:
    """Log normalizing constant of the member at ``lam``.

    Computed with a max shift: with ``m = max_y lam . phi(y)``, returns
    ``m + log sum_y a(y) exp(lam . phi(y) - m)``.  Always finite for finite
    inputs.  At ``lam = 0`` this is exactly 0 whenever the base sums to
    exactly 1.
    """
    lam = family.natural_param(lam)
    scores = family.statistic @ lam
    m = float(scores.max())
    return m + math.log(float(np.sum(family.base * np.exp(scores - m))))


def partition(family: ExponentialFamily, lam) -> float:
    """Normalizing constant ``Z``; may overflow to +inf for extreme ``lam``.

    ``log_partition`` is the canonical evaluator; this is a convenience.
    """
    value = log_partition(family, lam)
    with np.errstate(over="ignore"):
        return float(np.exp(value))


def log_member(family: ExponentialFamily, lam) -> np.ndarray:
    """Log probabilities of the member at ``lam``."""
    lam = family.natural_param(lam)
    scores = family.statistic @ lam
    m = float(scores.max())
    log_norm = m + math.log(float(np.sum(family.base * np.exp(scores - m))))
    return family.log_base + scores - log_norm


def member(family: ExponentialFamily, lam) -> np.ndarray:
    """Probability vector of the member at ``lam``.

    Entries are strictly positive (they can underflow to zero only when
    score spreads exceed ~700, far beyond desk scale) and sum to 1 within
    1e-12.
    """
    return np.exp(log_member(family, lam))


def moment_of(family: ExponentialFamily, q) -> np.ndarray:
    """Expected statistic under an arbitrary distribution ``q``."""
    q = family.distribution(q)
    return q @ family.statistic


def moment_map(family: ExponentialFamily, lam) -> np.ndarray:
    """Expected statistic under the member at ``lam``.

    This is also the gradient of :func:`log_partition` at ``lam``.
    """
    return moment_of(family, member(family, lam))


def lse(values) -> float:
    """Log-sum-exp with a max shift.  Rejects empty input."""
    v = _as_float_vector(values, "values")
    if v.size == 0:
        raise ValidationError("lse requires a nonempty vector")
    m = float(v.max())
    return m + math.log(float(np.sum(np.exp(v - m))))


def softmax(values) -> np.ndarray:
    """Exponentiate and normalize; stable for any finite input."""
    v = _as_float_vector(values, "values")
    if v.size == 0:
        raise ValidationError("softmax requires a nonempty vector")
    return np.exp(v - lse(v))


def entropy(q) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0.  Lies in [0, log n]."""
    q = as_distribution(q)
    mask = q > 0.0
    return float(-np.sum(q[mask] * np.log(q[mask])))
