#!/usr/bin/env python3
"""The KL difference identity and everything that falls out of it.

For any distribution q and parameters lam1, lam2:

    KL(q||p2) - KL(q||p1)  =  A(lam2) - A(lam1) + mu_q . (lam1 - lam2)

One linear relation ties together divergences, log-partition values, and
moments.  This script evaluates both sides on a random instance, then
specializes: three-point decomposition, ELBO, supporting hyperplane,
Bregman gap.
"""

import numpy as np

from expfam import (
    ExponentialFamily,
    bregman,
    elbo,
    kl,
    kl_difference_rhs,
    kl_within_family,
    log_partition,
    member,
    moment_map,
    moment_of,
    three_point_residual,
)


def random_instance(seed, n=40, d=5):
    rng = np.random.default_rng(seed)
    base = rng.standard_exponential(n)
    base /= base.sum()
    fam = ExponentialFamily(
        labels=tuple(f"y{i}" for i in range(n)),
        base=base,
        statistic=rng.uniform(-2, 2, (n, d)),
    )
    q = rng.standard_exponential(n)
    q /= q.sum()
    return fam, q, rng.uniform(-3, 3, d), rng.uniform(-3, 3, d)


def main():
    fam, q, lam1, lam2 = random_instance(seed=7)
    p1, p2 = member(fam, lam1), member(fam, lam2)

    print("The identity, evaluated both ways")
    lhs = kl(q, p2) - kl(q, p1)
    rhs = kl_difference_rhs(fam, q, lam1, lam2)
    print(f"  KL difference (summed):     {lhs!r}")
    print(f"  closed form:                {rhs!r}")
    print(f"  residual:                   {lhs - rhs:.3e}")

    print()
    print("Within-family specialization (q = p1)")
    print(f"  KL(p1||p2) summed:          {kl(p1, p2)!r}")
    print(f"  closed form:                {kl_within_family(fam, lam1, lam2)!r}")

    print()
    print("Three-point decomposition of KL(q||p2)")
    report = three_point_residual(fam, q, lam1, lam2)
    print(f"  lhs {report.lhs!r}  rhs {report.rhs!r}")
    print(f"  residual {report.residual:.3e}  tolerance {report.tolerance:.3e}  "
          f"passed={report.passed}")

    print()
    print("ELBO: bound + gap == A(lam2), bound <= A(lam2)")
    bound, gap = elbo(fam, q, lam2)
    log_norm = log_partition(fam, lam2)
    print(f"  bound {bound!r}")
    print(f"  gap   {gap!r}")
    print(f"  A     {log_norm!r}   bound+gap-A = {bound + gap - log_norm:.3e}")
    tight_bound, tight_gap = elbo(fam, p2, lam2)
    print(f"  at q = p2 the bound is tight: gap = {tight_gap:.3e}")

    print()
    print("Supporting hyperplane / Bregman gap (always >= 0)")
    gap12 = bregman(fam, lam2, lam1)
    print(f"  A(l2) - A(l1) - mu_1.(l2-l1) = {gap12!r}")
    print(f"  equals KL(p1||p2):             {kl(p1, p2)!r}")
    print(f"  swapped arguments:             {bregman(fam, lam1, lam2)!r}"
          f"  (= KL(p2||p1), asymmetric)")

    print()
    print("Moment mismatch drives the inner-product term")
    inner = float((moment_of(fam, q) - moment_map(fam, lam1)) @ (lam1 - lam2))
    print(f"  (mu_q - mu_1).(l1 - l2) = {inner!r}")
    print("  three-point rhs minus the two KL terms reproduces it exactly.")


if __name__ == "__main__":
    main()
