"""Command-line front end.

Subcommands read a JSON scenario (file path or ``-`` for standard input),
validate it against the shipped schema, dispatch to the library, and write
the report to standard output (JSON by default, CSV where noted).
Diagnostics go to standard error; exit code 2 signals a validation problem.

    normconc bound scenario.json
    normconc compare --example quadratic --theta 0.125 --n-max 100
    normconc allocate problem.json
    normconc verify scenario.json [--csv]
    normconc verify --suite regression [--samples N] [--csv]
    normconc sharpness scenario.json

The default RNG seed is 0, overridden by the NORMCONC_SEED environment
variable and then by ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import serialization as ser
from . import suites
from .allocation import AllocationProblem, optimize_allocation
from .concentration import quadratic_example_bounds
from .geometry import GeometryError
from .verification import sharpness_diagnostics

SEED_ENV_VAR = "NORMCONC_SEED"


def _fmt(x):
    """CSV numbers: '.' decimal, 17 significant digits, inf spelled out."""
    x = float(x) + 0.0  # normalize -0.0
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return format(x, ".17g")


def _read_scenario(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        payload = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ser.ValidationError(f"could not read scenario: {exc}")
    return ser.validate(payload, "scenario")


def _expect_kind(scenario, kind):
    if scenario.get("kind") != kind:
        raise ser.ValidationError(
            f"scenario kind {scenario.get('kind')!r} does not match subcommand {kind!r}")


def _resolve_seed(args, scenario=None):
    if args.seed is not None:
        return args.seed
    if scenario is not None and "seed" in scenario:
        return int(scenario["seed"])
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _cmd_bound(args):
    scenario = _read_scenario(args.scenario)
    _expect_kind(scenario, "bound")
    seed = _resolve_seed(args, scenario)
    scenario = dict(scenario, seed=seed)
    report = suites.bound_for_scenario(scenario, seed=seed)
    payload = ser.bound_report_to_json(report)
    ser.validate(payload, "report")
    print(ser.dumps(payload))
    return 0


def _cmd_compare(args):
    if args.example != "quadratic":
        raise ser.ValidationError(f"unknown example {args.example!r}")
    rows = []
    for n in range(1, args.n_max + 1):
        mcd, half = quadratic_example_bounds(n, args.theta)
        rows.append((n, args.theta, mcd.exponent, half.exponent, mcd.value, half.value))
    if args.output == "json":
        payload = [{"N": n, "theta": t, "mcd_exponent": a, "halfspace_exponent": b,
                    "mcd_bound": c, "halfspace_bound": d}
                   for n, t, a, b, c, d in rows]
        print(ser.dumps(payload))
        return 0
    print("N,theta,mcd_exponent,halfspace_exponent,mcd_bound,halfspace_bound")
    for n, t, a, b, c, d in rows:
        print(f"{n},{_fmt(t)},{_fmt(a)},{_fmt(b)},{_fmt(c)},{_fmt(d)}")
    return 0


def _cmd_allocate(args):
    scenario = _read_scenario(args.scenario)
    _expect_kind(scenario, "allocate")
    problem = AllocationProblem(
        gradient=scenario["gradient"],
        margins=scenario["margins"],
        diameters=scenario["diameters"],
        total_budget=scenario["total_budget"],
        min_per_coordinate=scenario.get("min_per_coordinate", 1),
    )
    allocation, report = optimize_allocation(problem)
    payload = ser.allocation_to_json(allocation, report)
    ser.validate(payload, "report")
    print(ser.dumps(payload))
    return 0


def _verify_rows(results):
    header = "name,estimate,standard_error,bound_value,bound_exponent,slack,passed"
    lines = [header]
    for name, verdict in results:
        lines.append(",".join([
            name,
            _fmt(verdict.estimate),
            _fmt(verdict.standard_error),
            _fmt(verdict.bound_value),
            _fmt(verdict.bound_exponent),
            _fmt(verdict.slack),
            "PASS" if verdict.passed else "FAIL",
        ]))
    return "\n".join(lines)


def _cmd_verify(args):
    results = []
    if args.suite is not None:
        if args.suite != "regression":
            raise ser.ValidationError(f"unknown suite {args.suite!r}")
        scenarios = suites.regression_scenarios(
            sample_count=args.samples if args.samples else 10**6)
        for scenario in scenarios:
            ser.validate(scenario, "scenario")
            verdict, _ = suites.run_verify_scenario(scenario)
            results.append((scenario["name"], verdict))
    else:
        if args.scenario is None:
            raise ser.ValidationError("provide a scenario file or --suite")
        scenario = _read_scenario(args.scenario)
        _expect_kind(scenario, "verify")
        seed = _resolve_seed(args, scenario)
        verdict, _ = suites.run_verify_scenario(
            scenario, sample_count=args.samples, default_seed=seed)
        results.append((scenario.get("name", "scenario"), verdict))
    if args.csv:
        print(_verify_rows(results))
    elif len(results) == 1:
        payload = ser.verdict_to_json(results[0][1], name=results[0][0])
        ser.validate(payload, "report")
        print(ser.dumps(payload))
    else:
        payload = {
            "kind": "verify_suite_report",
            "all_passed": all(v.passed for _, v in results),
            "results": [ser.verdict_to_json(v, name=n) for n, v in results],
        }
        ser.validate(payload, "report")
        print(ser.dumps(payload))
    return 0


def _cmd_sharpness(args):
    scenario = _read_scenario(args.scenario)
    _expect_kind(scenario, "sharpness")
    seed = _resolve_seed(args, scenario)
    psi = ser.psi_from_json(scenario["psi"])
    body = ser.set_from_json(scenario["set"])
    if isinstance(body, np.ndarray):
        raise ser.ValidationError("sharpness diagnostics need a ball, polytope, "
                                  "or sublevel body")
    report = sharpness_diagnostics(psi, scenario["mean"], body,
                                   dimension=scenario.get("dimension"), seed=seed)
    payload = ser.sharpness_to_json(report)
    ser.validate(payload, "report")
    print(ser.dumps(payload))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="normconc",
        description="Normal distances to convex sets and concentration bounds.")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="compute a concentration bound")
    p.add_argument("scenario", help="scenario JSON file, or - for stdin")
    p.set_defaults(fn=_cmd_bound)

    p = sub.add_parser("compare", help="tail-bound comparison sweeps")
    p.add_argument("--example", default="quadratic")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--output", choices=["csv", "json"], default="csv")
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("allocate", help="optimize a sample allocation")
    p.add_argument("scenario", help="problem JSON file, or - for stdin")
    p.set_defaults(fn=_cmd_allocate)

    p = sub.add_parser("verify", help="Monte Carlo check of a bound")
    p.add_argument("scenario", nargs="?", default=None,
                   help="scenario JSON file, or - for stdin")
    p.add_argument("--suite", default=None, help="named scenario suite")
    p.add_argument("--samples", type=int, default=None,
                   help="override the per-scenario sample count")
    p.add_argument("--csv", action="store_true", help="emit CSV rows")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("sharpness", help="asymptotic-sharpness diagnostics")
    p.add_argument("scenario", help="scenario JSON file, or - for stdin")
    p.set_defaults(fn=_cmd_sharpness)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ser.ValidationError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
