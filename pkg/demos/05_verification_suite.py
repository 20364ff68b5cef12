#!/usr/bin/env python3
"""Run the full identity-verification suite programmatically.

Every identity in the package is certified numerically: the closed-form
evaluators on one side, deliberately naive brute-force oracles (plain
probability-space sums, finite differences) on the other.  The same suite
backs the ``expfam verify`` command.
"""

from collections import defaultdict

import numpy as np

from expfam import ExponentialFamily, VerificationSuite, run_verification
from expfam.verify import CHECK_NAMES


def main():
    rng = np.random.default_rng(2024)
    n = 25
    base = rng.standard_exponential(n)
    base /= base.sum()
    fam = ExponentialFamily(
        labels=tuple(f"y{i}" for i in range(n)),
        base=base,
        statistic=rng.uniform(-2, 2, (n, 4)),
    )

    suite = VerificationSuite(
        seed=11, instance_counts={name: 50 for name in CHECK_NAMES}
    )
    outcomes = run_verification(fam, suite)

    by_check = defaultdict(list)
    for outcome in outcomes:
        by_check[outcome.check].append(outcome)

    print(f"family: n={fam.n_outcomes}, d={fam.dim}; 50 instances per check\n")
    print(f"{'check':35s} {'assertions':>10s} {'worst residual/tol':>20s}")
    for name in CHECK_NAMES:
        group = by_check[name]
        passed = sum(1 for o in group if o.report.passed)
        worst = max(
            (abs(o.report.residual) / o.report.tolerance
             for o in group if o.report.tolerance > 0),
            default=0.0,
        )
        print(f"{name:35s} {passed:5d}/{len(group):4d} {worst:20.3e}")

    total = sum(1 for o in outcomes if o.report.passed)
    print(f"\nchecks: {total}/{len(outcomes)}")
    print("same thing from the command line:")
    print("  expfam verify --spec demos/specs/triangle.json --seed 11 --count 50")


if __name__ == "__main__":
    main()
