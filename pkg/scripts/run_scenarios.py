#!/usr/bin/env python3
"""Run every packaged scenario and print a compact summary table.

Usage: python scripts/run_scenarios.py [--n N] [--gamma G] [--out DIR]
Exit code 0 iff every check of every scenario passed.
"""

import argparse
import sys

from markovdual.scenarios import run_scenario


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=None, help="grid size for the walk scenarios")
    parser.add_argument("--gamma", type=int, default=None, help="ladder width for the SEP scenarios")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=str, default=None, help="directory for emitted artifacts")
    args = parser.parse_args()

    reports = run_scenario("all", n=args.n, gamma=args.gamma, seed=args.seed, out=args.out)
    width = max(len(r.scenario) for r in reports)
    failures = 0
    for rep in reports:
        ok = sum(c.passed for c in rep.checks)
        failures += len(rep.checks) - ok
        print(f"{rep.scenario:<{width}}  {ok:3d}/{len(rep.checks):<3d} checks  {'PASS' if rep.passed else 'FAIL'}")
        for c in rep.checks:
            if not c.passed:
                print(f"    FAIL {c.name}: expected {c.expected}, observed {c.observed}")
    print(f"\n{'all scenarios passed' if failures == 0 else f'{failures} checks failed'}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
