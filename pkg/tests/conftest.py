import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cfield(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Call as ``acceptance(number, title, passed, detail)``; the line is printed
    immediately and repeated in the terminal summary.
    """

    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} -- {detail}"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
