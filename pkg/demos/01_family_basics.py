#!/usr/bin/env python3
"""Build a finite exponential family and walk through the basic evaluators.

Covers: construction, partition function, members in log space, moments,
the softmax specialization, and translation covariance of the categorical
log partition.
"""

import numpy as np

from expfam import (
    ExponentialFamily,
    categorical,
    entropy,
    log_partition,
    lse,
    member,
    moment_map,
    moment_of,
    partition,
    softmax,
)


def banner(title):
    print()
    print("=" * 72)
    print(title)
    print("=" * 72)


def main():
    banner("A two-outcome family: base (1/2, 1/2), statistic 0/1")
    coin = ExponentialFamily(
        labels=("tails", "heads"), base=[0.5, 0.5], statistic=[[0.0], [1.0]]
    )
    lam = np.array([np.log(2.0)])
    print("log_partition at log(2):", log_partition(coin, lam), " (log(3/2) =", np.log(1.5), ")")
    print("partition:", partition(coin, lam))
    print("member:", member(coin, lam), " (2/3 of the score goes to heads)")
    print("moment:", moment_map(coin, lam), " = P(heads)")
    print("at lam = 0 the member is the base:", member(coin, [0.0]))

    banner("Categorical family: members are softmax distributions")
    die = categorical(6)
    lam = np.array([0.3, -0.8, 1.1, 0.0, -2.0, 0.5])
    print("member:          ", member(die, lam))
    print("softmax(lam):    ", softmax(lam))
    print("moment == member:", np.allclose(moment_map(die, lam), member(die, lam)))
    print("log_partition = lse(lam) - log 6:",
          log_partition(die, lam), "=", lse(lam) - np.log(6.0))

    banner("Translation covariance: shifting every score shifts A by the same")
    for shift in (-100.0, 0.5, 250.0):
        delta = log_partition(die, lam + shift) - log_partition(die, lam)
        print(f"  shift {shift:+8.1f}:  A(lam + c) - A(lam) = {delta!r}")

    banner("Moments of arbitrary distributions")
    q = np.array([0.05, 0.2, 0.4, 0.15, 0.1, 0.1])
    print("moment_of(q) for the categorical family is q itself:", moment_of(die, q))
    print("entropy(q) =", entropy(q), " <= log 6 =", np.log(6.0))

    banner("Extreme parameters: log-space evaluators stay finite")
    lam = np.array([700.0, -700.0])
    print("log_partition at +-700:", log_partition(categorical(2), lam))
    print("member:", member(categorical(2), lam),
          " (the losing outcome underflows below ~1e-308; scores this")
    print("  extreme exceed the documented desk-scale range)")


if __name__ == "__main__":
    main()
