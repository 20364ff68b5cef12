"""Command-line surface.

Subcommands
-----------
eval     evaluate log-partition, partition, member, and moment at a parameter
project  moment-match a target (``--mu``) or project a distribution (``--q``)
control  solve a KL-regularized reward problem, optionally over a beta sweep
verify   run the full identity-verification suite against a family document

Exit codes: 0 success, 1 verification check failed, 2 document parse error,
3 validation error, 4 dimension mismatch or bad temperature, 5 infeasible
boundary target, 6 iteration cap hit.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

import numpy as np

from .control import beta_sweep, objective_eval
from .errors import DimensionMismatchError, DocumentFormatError, ValidationError
from .family import log_partition, member, moment_map, moment_of, partition
from .fileio import load_family, load_reward_problem, write_report
from .oracle import VerificationSuite
from .projection import Verdict, SolveOptions, moment_match
from .verify import CHECK_NAMES, run_verification

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DIMENSION = 4
EXIT_INFEASIBLE = 5
EXIT_MAX_ITER = 6

_VERDICT_EXIT = {
    Verdict.CONVERGED: EXIT_OK,
    Verdict.INFEASIBLE_BOUNDARY: EXIT_INFEASIBLE,
    Verdict.MAX_ITERATIONS: EXIT_MAX_ITER,
}


def _parse_vector(text: str, flag: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace(",", " ").split()])
    except ValueError as exc:
        raise ValidationError(f"{flag} expects comma- or space-separated reals") from exc


def _solve_options(args) -> SolveOptions:
    options = SolveOptions()
    if args.tol_moment is not None:
        if args.tol_moment <= 0:
            raise ValidationError("--tol-moment must be positive")
        options = dataclasses.replace(options, tol_moment=args.tol_moment)
    if args.max_iter is not None:
        if args.max_iter < 1:
            raise ValidationError("--max-iter must be at least 1")
        options = dataclasses.replace(options, max_iter=args.max_iter)
    return options


def _trace_rows(report) -> list[dict]:
    return [
        {
            "iteration": entry.iteration,
            "objective": entry.objective,
            "gradient_norm": entry.gradient_norm,
            "step_size": entry.step_size,
        }
        for entry in report.trace
    ]


def _finish(report_doc: dict, out, started: float) -> None:
    report_doc["wall_time_s"] = time.perf_counter() - started
    if out:
        write_report(report_doc, out)


def _cmd_eval(args) -> int:
    started = time.perf_counter()
    family, digest = load_family(args.spec)
    lam = _parse_vector(args.lam, "--lambda")
    log_norm = log_partition(family, lam)
    probs = member(family, lam)
    moment = moment_map(family, lam)
    print(f"family: {args.spec} (n={family.n_outcomes}, d={family.dim}, {digest})")
    print(f"lambda: {lam.tolist()}")
    print(f"log_partition: {log_norm!r}")
    print(f"partition: {partition(family, lam)!r}")
    print(f"member: {probs.tolist()}")
    print(f"moment: {moment.tolist()}")
    report = {
        "command": ["eval", "--spec", str(args.spec), "--lambda", args.lam],
        "input_digest": digest,
        "lambda": lam,
        "log_partition": log_norm,
        "partition": partition(family, lam),
        "member": probs,
        "moment": moment,
    }
    _finish(report, args.out, started)
    return EXIT_OK


def _cmd_project(args) -> int:
    started = time.perf_counter()
    family, digest = load_family(args.spec)
    if (args.mu is None) == (args.q is None):
        raise ValidationError("project needs exactly one of --mu or --q")
    options = _solve_options(args)
    if args.mu is not None:
        target = family.moment_vector(_parse_vector(args.mu, "--mu"))
        mode = ["--mu", args.mu]
    else:
        q = family.distribution(_parse_vector(args.q, "--q"))
        target = moment_of(family, q)
        mode = ["--q", args.q]
    report = moment_match(family, target, options)
    print(f"family: {args.spec} (n={family.n_outcomes}, d={family.dim}, {digest})")
    print(f"verdict: {report.verdict.value}")
    print(f"lambda_star: {report.lambda_star.tolist()}")
    print(f"moment_residual: {report.moment_residual!r}")
    print(f"objective: {report.objective!r}")
    print(f"iterations: {report.iterations}")
    if report.converged:
        print(f"member: {member(family, report.lambda_star).tolist()}")
    doc = {
        "command": ["project", "--spec", str(args.spec), *mode],
        "input_digest": digest,
        "verdict": report.verdict,
        "lambda_star": report.lambda_star,
        "moment_residual": report.moment_residual,
        "objective": report.objective,
        "iterations": report.iterations,
        "trace": _trace_rows(report),
    }
    _finish(doc, args.out, started)
    return _VERDICT_EXIT[report.verdict]


def _cmd_control(args) -> int:
    started = time.perf_counter()
    for b in args.beta or []:
        if not b > 0:
            print(f"error: temperatures must be positive, got {b!r}", file=sys.stderr)
            return EXIT_DIMENSION
    override = args.beta[0] if args.beta else None
    problem, digest, _ = load_reward_problem(args.spec, beta=override)
    betas = args.beta if args.beta else [problem.beta]
    entries = []
    print(f"problem: {args.spec} (n={problem.n_outcomes}, {digest})")
    for point in beta_sweep(problem, betas):
        achieved = objective_eval(
            dataclasses.replace(problem, beta=point.beta), point.q_star
        )
        gap = point.value - achieved
        print(
            f"beta={point.beta!r} value={point.value!r} "
            f"objective_at_q_star={achieved!r} q_star={point.q_star.tolist()}"
        )
        entries.append(
            {
                "beta": point.beta,
                "value": point.value,
                "q_star": point.q_star,
                "objective_at_q_star": achieved,
                "value_gap": gap,
            }
        )
    doc = {
        "command": ["control", "--spec", str(args.spec),
                    *(x for b in betas for x in ("--beta", repr(b)))],
        "input_digest": digest,
        "entries": entries,
    }
    _finish(doc, args.out, started)
    return EXIT_OK


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    family, digest = load_family(args.spec)
    seed = args.seed if args.seed is not None else 0
    count = args.count if args.count is not None else 20
    if count < 0:
        raise ValidationError("--count must be nonnegative")
    command = ["verify", "--spec", str(args.spec), "--seed", str(seed),
               "--count", str(count)]
    if count == 0:
        print("warning: --count 0 runs no instances; vacuous pass")
        print("checks: 0/0")
        doc = {
            "command": command,
            "input_digest": digest,
            "seed": seed,
            "checks": [],
            "summary": {"passed": 0, "total": 0},
        }
        _finish(doc, args.out, started)
        return EXIT_OK

    suite = VerificationSuite(
        seed=seed, instance_counts={name: count for name in CHECK_NAMES}
    )
    outcomes = run_verification(family, suite)
    passed = sum(1 for o in outcomes if o.report.passed)
    by_check: dict[str, list] = {}
    for o in outcomes:
        by_check.setdefault(o.check, []).append(o)
    for name in CHECK_NAMES:
        group = by_check.get(name, [])
        ok = sum(1 for o in group if o.report.passed)
        print(f"check {name}: {ok}/{len(group)} assertions pass")
    print(f"checks: {passed}/{len(outcomes)}")
    for o in outcomes:
        if not o.report.passed:
            print(
                f"FAIL {o.check}[{o.instance}] {o.detail}: "
                f"lhs={o.report.lhs!r} rhs={o.report.rhs!r} "
                f"residual={o.report.residual!r} tolerance={o.report.tolerance!r} "
                f"(reproduce with --seed {seed} --count {count})",
                file=sys.stderr,
            )
    doc = {
        "command": command,
        "input_digest": digest,
        "seed": seed,
        "checks": [
            {
                "check": o.check,
                "instance": o.instance,
                "detail": o.detail,
                "lhs": o.report.lhs,
                "rhs": o.report.rhs,
                "residual": o.report.residual,
                "tolerance": o.report.tolerance,
                "pass": o.report.passed,
            }
            for o in outcomes
        ],
        "summary": {"passed": passed, "total": len(outcomes)},
    }
    _finish(doc, args.out, started)
    return EXIT_OK if passed == len(outcomes) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expfam",
        description="Finite exponential families: evaluators, projections, "
        "KL-regularized control, and identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the family at a parameter")
    p_eval.add_argument("--spec", required=True, help="family document (JSON)")
    p_eval.add_argument("--lambda", dest="lam", required=True,
                        help="natural parameter, comma separated")
    p_eval.add_argument("--out", help="write a machine-readable report here")
    p_eval.set_defaults(func=_cmd_eval)

    p_proj = sub.add_parser("project", help="moment matching and projections")
    p_proj.add_argument("--spec", required=True)
    p_proj.add_argument("--mu", help="target moment vector, comma separated")
    p_proj.add_argument("--q", help="distribution to project, comma separated")
    p_proj.add_argument("--tol-moment", type=float, default=None)
    p_proj.add_argument("--max-iter", type=int, default=None)
    p_proj.add_argument("--out")
    p_proj.set_defaults(func=_cmd_project)

    p_ctrl = sub.add_parser("control", help="KL-regularized reward maximization")
    p_ctrl.add_argument("--spec", required=True, help="reward-problem document (JSON)")
    p_ctrl.add_argument("--beta", type=float, action="append",
                        help="temperature; repeat for a sweep")
    p_ctrl.add_argument("--out")
    p_ctrl.set_defaults(func=_cmd_control)

    p_verify = sub.add_parser("verify", help="run the identity-verification suite")
    p_verify.add_argument("--spec", required=True)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--count", type=int, default=None,
                          help="instances per check (default 20)")
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
