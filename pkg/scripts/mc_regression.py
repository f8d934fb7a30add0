#!/usr/bin/env python3
"""Run the full Monte Carlo regression suite (10^6 samples per scenario by
default) and print one verdict row per scenario plus a summary line."""

import argparse
import sys
import time

from normconc.suites import regression_scenarios, run_verify_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=10**6)
    args = parser.parse_args()

    scenarios = regression_scenarios(sample_count=args.samples)
    failures = 0
    t0 = time.time()
    for scenario in scenarios:
        verdict, bound = run_verify_scenario(scenario)
        status = "PASS" if verdict.passed else "FAIL"
        if not verdict.passed:
            failures += 1
        print(f"{status}  {scenario['name']:42s} estimate={verdict.estimate:.3e} "
              f"bound={bound.value:.3e} slack={verdict.slack:+.3e}")
    elapsed = time.time() - t0
    print(f"{len(scenarios) - failures}/{len(scenarios)} scenarios passed "
          f"in {elapsed:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
