"""Acceptance gate: criteria 1-10 at their tolerances and runtime budgets.

Each suite runs once per session; a criterion passes when every check in its
report passes and the suite finished inside its budget.  The pass/fail lines
are printed in the terminal summary, or directly when run as a script:

    python tests/test_acceptance.py
"""

import sys

import pytest

from colombeau import suites

_RESULTS = {}


def results() -> dict:
    if not _RESULTS:
        for r in suites.run_all():
            _RESULTS[r.criterion] = r
    return _RESULTS


def summary_lines() -> list:
    return [results()[k].line() for k in sorted(results())]


@pytest.mark.parametrize("criterion", range(1, 11))
def test_criterion(criterion):
    r = results()[criterion]
    print(r.line())
    assert r.report.passed, r.report.to_plain()
    assert r.within_budget, f"{r.elapsed:.2f} s exceeds the {r.budget:g} s budget"


if __name__ == "__main__":
    lines = summary_lines()
    print("\n".join(lines))
    sys.exit(0 if all(results()[k].passed for k in results()) else 1)
