"""Acceptance gate: every certificate the package promises, at its stated
tolerance, with one printed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from expfam import (
    ExponentialFamily,
    RewardProblem,
    SolveOptions,
    Verdict,
    boltzmann,
    bregman,
    elbo,
    grad_check,
    kl,
    kl_difference_rhs,
    kl_within_family,
    log_partition,
    lse,
    member,
    moment_map,
    moment_of,
    moment_match,
    objective_eval,
    regularized_value,
    reverse_i_projection,
    i_projection,
)
from expfam.oracle import kl_direct, mean_preserving_peers, random_simplex

REPO = Path(__file__).resolve().parents[1]
TRIANGLE = REPO / "demos" / "specs" / "triangle.json"

TIGHT = SolveOptions(tol_moment=5e-13)


def conclude(name: str, failures: list, extra: str = "") -> None:
    status = "PASS" if not failures else "FAIL"
    suffix = f" ({extra})" if extra else ""
    print(f"acceptance {name}: {status}{suffix}")
    assert not failures, f"{name}: {failures[:5]} ({len(failures)} total)"


def draw_family(rng, n_cap, d_cap):
    n = int(rng.integers(2, n_cap + 1))
    d = int(rng.integers(1, d_cap + 1))
    base = rng.standard_exponential(n)
    base /= base.sum()
    statistic = rng.uniform(-2.0, 2.0, (n, d))
    return ExponentialFamily(
        labels=tuple(f"y{i}" for i in range(n)), base=base, statistic=statistic
    )


def draw_q(rng, n):
    e = rng.standard_exponential(n)
    return e / e.sum()


def scaled_tol(*terms):
    return 1e-12 + 1e-10 * (1.0 + sum(abs(t) for t in terms))


# ---------------------------------------------------------------------------
# 1. Identity suite: difference, within-family, three-point, ELBO, dual
#    pairing, Bregman.  1000 instances each, n <= 200, d <= 10, |lam| <= 3.
# ---------------------------------------------------------------------------


def test_criterion_1_identity_suite():
    started = time.perf_counter()
    failures = []
    worst = 0.0

    rng = np.random.default_rng(101)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        q = draw_q(rng, fam.n_outcomes)
        lam1 = rng.uniform(-3, 3, fam.dim)
        lam2 = rng.uniform(-3, 3, fam.dim)
        kl1 = kl_direct(q, member(fam, lam1))
        kl2 = kl_direct(q, member(fam, lam2))
        residual = (kl2 - kl1) - kl_difference_rhs(fam, q, lam1, lam2)
        tol = scaled_tol(kl1, kl2)
        worst = max(worst, abs(residual) / tol)
        if abs(residual) > tol:
            failures.append(("difference", i, residual))

    rng = np.random.default_rng(102)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        lam1 = rng.uniform(-3, 3, fam.dim)
        lam2 = rng.uniform(-3, 3, fam.dim)
        lhs = kl_direct(member(fam, lam1), member(fam, lam2))
        rhs = kl_within_family(fam, lam1, lam2)
        tol = scaled_tol(lhs, rhs)
        worst = max(worst, abs(lhs - rhs) / tol)
        if abs(lhs - rhs) > tol:
            failures.append(("within_family", i, lhs - rhs))

    rng = np.random.default_rng(103)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        q = draw_q(rng, fam.n_outcomes)
        lam1 = rng.uniform(-3, 3, fam.dim)
        lam2 = rng.uniform(-3, 3, fam.dim)
        p1, p2 = member(fam, lam1), member(fam, lam2)
        kq2, kq1, k12 = kl_direct(q, p2), kl_direct(q, p1), kl_direct(p1, p2)
        inner = float((moment_of(fam, q) - moment_map(fam, lam1)) @ (lam1 - lam2))
        residual = kq2 - (kq1 + k12 + inner)
        tol = scaled_tol(kq2, kq1, k12, inner)
        worst = max(worst, abs(residual) / tol)
        if abs(residual) > tol:
            failures.append(("three_point", i, residual))

    rng = np.random.default_rng(105)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        q = draw_q(rng, fam.n_outcomes)
        lam = rng.uniform(-3, 3, fam.dim)
        bound, gap = elbo(fam, q, lam)
        log_norm = log_partition(fam, lam)
        residual = (bound + gap) - log_norm
        tol = scaled_tol(bound, gap, log_norm)
        worst = max(worst, abs(residual) / tol)
        if abs(residual) > tol:
            failures.append(("elbo", i, residual))
        if bound > log_norm + 1e-12:
            failures.append(("elbo_bound", i, bound - log_norm))

    rng = np.random.default_rng(107)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        lam0 = rng.uniform(-3, 3, fam.dim)
        mu = moment_map(fam, lam0)
        report = moment_match(fam, mu, TIGHT)
        if not report.converged:
            failures.append(("dual_solve", i, report.verdict))
            continue
        lam_star = report.lambda_star
        dual = kl_within_family(fam, lam_star, np.zeros(fam.dim))
        pairing = float(lam_star @ mu)
        log_norm = log_partition(fam, lam_star)
        residual = log_norm + dual - pairing
        tol = scaled_tol(log_norm, dual, pairing)
        worst = max(worst, abs(residual) / tol)
        if abs(residual) > tol:
            failures.append(("fenchel_equality", i, residual))
        ident = dual - kl_direct(member(fam, lam_star), fam.base)
        tol = scaled_tol(dual)
        worst = max(worst, abs(ident) / tol)
        if abs(ident) > tol:
            failures.append(("dual_is_kl", i, ident))

    rng = np.random.default_rng(108)
    for i in range(1000):
        fam = draw_family(rng, 200, 10)
        lam1 = rng.uniform(-3, 3, fam.dim)
        lam2 = rng.uniform(-3, 3, fam.dim)
        lhs = kl_direct(member(fam, lam1), member(fam, lam2))
        gap = bregman(fam, lam2, lam1)
        tol = scaled_tol(lhs, gap)
        worst = max(worst, abs(lhs - gap) / tol)
        if abs(lhs - gap) > tol:
            failures.append(("bregman", i, lhs - gap))

    elapsed = time.perf_counter() - started
    if elapsed > 60.0:
        failures.append(("runtime", elapsed))
    conclude(
        "1 identity suite",
        failures,
        f"6000 instances, worst residual at {worst:.2e} of tolerance, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# 2. Gradient of the log partition vs central differences.
# ---------------------------------------------------------------------------


def test_criterion_2_gradient_check():
    started = time.perf_counter()
    rng = np.random.default_rng(2)
    failures = []
    worst = 0.0
    for i in range(100):
        fam = draw_family(rng, 50, 8)
        err = grad_check(fam, rng.uniform(-3, 3, fam.dim))
        worst = max(worst, err)
        if err > 1e-6:
            failures.append((i, err))
    elapsed = time.perf_counter() - started
    if elapsed > 10.0:
        failures.append(("runtime", elapsed))
    conclude(
        "2 gradient check",
        failures,
        f"100 families, max rel error {worst:.2e}, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# 3. Convexity: Bregman gap nonnegative, strictly positive for distinct
#    members.
# ---------------------------------------------------------------------------


def test_criterion_3_convexity():
    rng = np.random.default_rng(3)
    failures = []
    strict_pairs = 0
    for i in range(1000):
        fam = draw_family(rng, 60, 8)
        lam1 = rng.uniform(-3, 3, fam.dim)
        lam2 = rng.uniform(-3, 3, fam.dim)
        gap = bregman(fam, lam2, lam1)
        if gap < -1e-12:
            failures.append(("nonneg", i, gap))
        variation = 0.5 * float(np.abs(member(fam, lam1) - member(fam, lam2)).sum())
        if variation > 1e-8:
            strict_pairs += 1
            if gap <= 1e-10:
                failures.append(("strict", i, gap, variation))
    conclude(
        "3 convexity",
        failures,
        f"1000 pairs, {strict_pairs} distinct-member pairs all strictly positive",
    )


# ---------------------------------------------------------------------------
# 4. Solver round trip.
# ---------------------------------------------------------------------------


def test_criterion_4_solver_round_trip():
    started = time.perf_counter()
    rng = np.random.default_rng(4)
    failures = []
    worst_iters, worst_kl = 0, 0.0
    for i in range(100):
        fam = draw_family(rng, 50, 8)
        lam0 = rng.uniform(-2, 2, fam.dim)
        report = moment_match(fam, moment_map(fam, lam0))
        if not report.converged:
            failures.append(("verdict", i, report.verdict))
            continue
        worst_iters = max(worst_iters, report.iterations)
        if report.iterations > 50:
            failures.append(("iterations", i, report.iterations))
        recovery = kl(member(fam, report.lambda_star), member(fam, lam0))
        worst_kl = max(worst_kl, recovery)
        if recovery > 1e-9:
            failures.append(("recovery", i, recovery))
    elapsed = time.perf_counter() - started
    if elapsed > 30.0:
        failures.append(("runtime", elapsed))
    conclude(
        "4 solver round trip",
        failures,
        f"100 solves, max iterations {worst_iters}, worst recovery KL {worst_kl:.2e}, "
        f"{elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# 5. Projection optimality and Pythagorean decompositions.
# ---------------------------------------------------------------------------


def test_criterion_5_projection_optimality():
    rng = np.random.default_rng(5)
    failures = []
    triples = 0
    for trial in range(10):
        fam = draw_family(rng, 40, 5)

        # reverse projection of an arbitrary q beats 100 random members
        q = draw_q(rng, fam.n_outcomes)
        projected, report = reverse_i_projection(fam, q, TIGHT)
        best = kl_direct(q, projected)
        for j in range(100):
            probe_lam = rng.uniform(-3, 3, fam.dim)
            probe = member(fam, probe_lam)
            if kl_direct(q, probe) < best - 1e-10:
                failures.append(("reverse_margin", trial, j))
            lhs = kl_direct(q, probe)
            rhs = best + kl_direct(projected, probe)
            triples += 1
            if abs(lhs - rhs) > 1e-9:
                failures.append(("reverse_pythagoras", trial, j, lhs - rhs))

        # forward projection beats 100 members of the moment slice
        lam0 = rng.uniform(-2, 2, fam.dim)
        mu = moment_map(fam, lam0)
        projected, report = i_projection(fam, mu, TIGHT)
        kl_star = kl_direct(projected, fam.base)
        peers = mean_preserving_peers(
            fam, report.lambda_star, 100, seed=int(rng.integers(2**63))
        )
        for j, peer in enumerate(peers):
            if kl_direct(peer, fam.base) < kl_star - 1e-10:
                failures.append(("slice_margin", trial, j))
            lhs = kl_direct(peer, fam.base)
            rhs = kl_direct(peer, projected) + kl_star
            triples += 1
            if abs(lhs - rhs) > 1e-9:
                failures.append(("slice_pythagoras", trial, j, lhs - rhs))
    conclude(
        "5 projection optimality",
        failures,
        f"10 families, 100 probes each side, {triples} Pythagorean triples",
    )


# ---------------------------------------------------------------------------
# 6. Control optimality.
# ---------------------------------------------------------------------------


def test_criterion_6_control_optimality():
    rng = np.random.default_rng(6)
    failures = []
    for trial in range(10):
        n = int(rng.integers(2, 25))
        base = rng.standard_exponential(n)
        base /= base.sum()
        problem = RewardProblem(
            labels=tuple(f"y{i}" for i in range(n)),
            base=base,
            reward=rng.uniform(-2, 2, n),
            beta=float(rng.uniform(0.2, 4.0)),
        )
        value = regularized_value(problem)
        q_star = boltzmann(problem)
        achieved = objective_eval(problem, q_star)
        if abs(value - achieved) > 1e-10:
            failures.append(("value_identity", trial, value - achieved))
        for j, q in enumerate(random_simplex(n, 100, seed=trial)):
            if objective_eval(problem, q) > value + 1e-10:
                failures.append(("margin", trial, j))

    # 1000 probes against one fixed problem
    rng = np.random.default_rng(60)
    n = 12
    base = rng.standard_exponential(n)
    base /= base.sum()
    problem = RewardProblem(
        labels=tuple(f"y{i}" for i in range(n)),
        base=base,
        reward=rng.uniform(-2, 2, n),
        beta=0.7,
    )
    value = regularized_value(problem)
    for j, q in enumerate(random_simplex(n, 1000, seed=61)):
        if objective_eval(problem, q) > value + 1e-10:
            failures.append(("margin_bulk", j))

    # categorical closed form at 1e-12
    rng = np.random.default_rng(62)
    for trial in range(50):
        k = int(rng.integers(2, 15))
        reward = rng.uniform(-3, 3, k)
        beta = float(rng.uniform(0.2, 4.0))
        problem = RewardProblem(
            labels=tuple(f"y{i}" for i in range(k)),
            base=np.full(k, 1.0 / k),
            reward=reward,
            beta=beta,
        )
        closed = beta * lse(reward / beta) - beta * math.log(k)
        if abs(regularized_value(problem) - closed) > 1e-12:
            failures.append(("closed_form", trial))
    conclude(
        "6 control optimality",
        failures,
        "10 problems x 100 probes + 1000 bulk probes + 50 closed forms",
    )


# ---------------------------------------------------------------------------
# 7. Duality: Fenchel equality at matched pairs, inequality off-match.
# ---------------------------------------------------------------------------


def test_criterion_7_duality():
    rng = np.random.default_rng(7)
    failures = []
    worst_eq, worst_ineq = 0.0, math.inf
    for trial in range(25):
        fam = draw_family(rng, 30, 5)
        lam0 = rng.uniform(-2, 2, fam.dim)
        mu = moment_map(fam, lam0)
        report = moment_match(fam, mu, TIGHT)
        if not report.converged:
            failures.append(("solve", trial, report.verdict))
            continue
        lam_star = report.lambda_star
        dual = kl_within_family(fam, lam_star, np.zeros(fam.dim))
        equality = log_partition(fam, lam_star) + dual - float(lam_star @ mu)
        worst_eq = max(worst_eq, abs(equality))
        if abs(equality) > 1e-10:
            failures.append(("equality", trial, equality))
        for j in range(100):
            probe = rng.uniform(-3, 3, fam.dim)
            slack = log_partition(fam, probe) + dual - float(probe @ mu)
            worst_ineq = min(worst_ineq, slack)
            if slack < -1e-12:
                failures.append(("inequality", trial, j, slack))
    conclude(
        "7 duality",
        failures,
        f"25 matched pairs, worst |equality| {worst_eq:.2e}, "
        f"min inequality slack {worst_ineq:.2e}",
    )


# ---------------------------------------------------------------------------
# 8. Boundary behavior along a path to a vertex.
# ---------------------------------------------------------------------------


def test_criterion_8_boundary_behavior():
    failures = []
    coin = ExponentialFamily(
        labels=("t", "h"), base=[0.5, 0.5], statistic=[[0.0], [1.0]]
    )
    cases = [
        (coin, np.array([1.0])),
        (
            ExponentialFamily(
                labels=("a", "b", "c"),
                base=[0.2, 0.5, 0.3],
                statistic=[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            ),
            np.array([1.0, 0.0]),
        ),
    ]
    for idx, (fam, vertex) in enumerate(cases):
        mu_base = moment_map(fam, np.zeros(fam.dim))
        norms = []
        for t in (0.9, 0.99, 0.999):
            report = moment_match(fam, (1 - t) * mu_base + t * vertex)
            if not report.converged:
                failures.append(("interior", idx, t, report.verdict))
                continue
            norms.append(float(np.linalg.norm(report.lambda_star)))
        if not all(a < b for a, b in zip(norms, norms[1:])):
            failures.append(("monotone", idx, norms))
        report = moment_match(fam, vertex)
        if report.verdict is not Verdict.INFEASIBLE_BOUNDARY:
            failures.append(("vertex", idx, report.verdict))
    conclude("8 boundary behavior", failures, "2 families, t in {0.9,0.99,0.999,1}")


# ---------------------------------------------------------------------------
# 9. CLI contract through real subprocesses.
# ---------------------------------------------------------------------------


def test_criterion_9_cli_contract(tmp_path):
    failures = []

    def run(*argv):
        return subprocess.run(
            [sys.executable, "-m", "expfam", *argv],
            capture_output=True,
            text=True,
            cwd=REPO,
        )

    done = run("verify", "--spec", str(TRIANGLE), "--seed", "11", "--count", "3")
    if done.returncode != 0:
        failures.append(("verify_exit", done.returncode, done.stderr[-300:]))

    corrupted = tmp_path / "corrupted.json"
    doc = json.loads(TRIANGLE.read_text())
    doc["base"] = [1.2, -0.2, 0.0]
    corrupted.write_text(json.dumps(doc))
    done = run("verify", "--spec", str(corrupted))
    if done.returncode != 3:
        failures.append(("corrupted_exit", done.returncode))

    malformed = tmp_path / "malformed.json"
    malformed.write_text("{ nope")
    done = run("eval", "--spec", str(malformed), "--lambda", "0,0")
    if done.returncode != 2:
        failures.append(("malformed_exit", done.returncode))

    done = run("project", "--spec", str(TRIANGLE), "--mu", "1.0,0.0")
    if done.returncode != 5:
        failures.append(("vertex_exit", done.returncode))

    out = tmp_path / "report.json"
    argv = ("verify", "--spec", str(TRIANGLE), "--seed", "17", "--count", "2",
            "--out", str(out))
    first = second = None
    if run(*argv).returncode == 0:
        first = b"".join(
            line for line in out.read_bytes().splitlines(keepends=True)
            if b"wall_time_s" not in line
        )
    if run(*argv).returncode == 0:
        second = b"".join(
            line for line in out.read_bytes().splitlines(keepends=True)
            if b"wall_time_s" not in line
        )
    if first is None or first != second:
        failures.append(("determinism",))
    conclude("9 cli contract", failures, "exit codes 0/2/3/5 + byte determinism")
