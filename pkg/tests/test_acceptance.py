"""Acceptance gate: every reproducible claim at its stated tolerance.

Each criterion prints one ``[PASS]``/``[FAIL]`` line; the lines are also
collected into the terminal summary by ``conftest.py``.
"""

import pytest

from percmono import experiments

RESULTS = []


@pytest.fixture(scope="module", autouse=True)
def compiled():
    experiments.warm_up()


@pytest.mark.slow
@pytest.mark.parametrize("check", experiments.ALL_CHECKS,
                         ids=[fn.__name__ for fn in experiments.ALL_CHECKS])
def test_criterion(check):
    result = check()
    RESULTS.append(result.line())
    print(result.line())
    for key, value in result.values.items():
        print(f"    {key}: {value}")
    assert result.passed, result.line()
