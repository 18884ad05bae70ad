import pytest
from hypothesis import HealthCheck, settings

from sshr.ptope import Parallelotope

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines collected by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def worked_triple():
    """The three parallelotopes covering 0x46b9 in the worked example."""
    s1 = Parallelotope(4, 0b0000, ((0,), (1,), (2,)))
    s2 = Parallelotope(4, 0b0110, ((3,),))
    s3 = Parallelotope(4, 0b0001, ((0, 1), (3,)))
    return s1, s2, s3
