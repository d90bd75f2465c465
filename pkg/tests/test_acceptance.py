"""End-to-end acceptance gate: one test per registered verification check.

Each test prints a PASS/FAIL line with the check's diagnostic detail and
asserts the result, so a plain `pytest tests/test_acceptance.py -v` doubles
as the full verification matrix.
"""

import time

import pytest

from nlwe import acceptance

_durations: dict[str, float] = {}


@pytest.mark.parametrize(
    "check", acceptance.ALL_CHECKS, ids=lambda fn: fn.__name__.removeprefix("check_")
)
def test_acceptance(check):
    t0 = time.perf_counter()
    result = check(seed=0)
    dt = time.perf_counter() - t0
    _durations[result.name] = dt
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.name} [{dt:.2f}s]: {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"


def test_suite_runtime_budget():
    # Runs after the parametrized checks: their combined wall time must fit
    # well inside the one-minute budget.
    assert len(_durations) == len(acceptance.ALL_CHECKS)
    total = sum(_durations.values())
    assert total < 60.0, f"verification checks took {total:.1f}s"
