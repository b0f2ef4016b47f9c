import pytest

from dunklrad import kernels
from dunklrad.measure import DunklIndex

# (d, gamma) pairs with integer, half-integer and fractional Bessel orders
INDICES = [(1, 0.5), (2, 0.0), (3, 1.0), (1, 0.0)]


@pytest.fixture(scope="session", autouse=True)
def compiled_kernels():
    kernels.warmup()
    return kernels.BACKEND


@pytest.fixture(params=INDICES, ids=lambda p: f"d{p[0]}-g{p[1]:g}")
def idx(request):
    return DunklIndex(*request.param)


ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record one PASS/FAIL line per acceptance criterion (printed in the summary)."""

    def record(number, passed, detail=""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
