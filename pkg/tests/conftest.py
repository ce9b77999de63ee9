from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def exact_q_gt1():
    from shs6v.weights import ModelParams

    return lambda I, J: ModelParams(F(2), -F(1, 2) * F(2) ** (-(I + J - 1)), I, J)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
    missing = [n for n in range(1, 13) if n not in mod.RESULTS]
    for n in missing:
        terminalreporter.write_line(f"CRITERION {n:2d}: FAIL  (did not report; see traceback)")
