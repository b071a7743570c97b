import numpy as np
import pytest

from smean import Ellipsoid, Phantom, RadialBump


@pytest.fixture
def ellipse():
    return Ellipsoid((1.0, 0.7))


@pytest.fixture
def ellipsoid3():
    return Ellipsoid((1.0, 0.8, 0.6))


@pytest.fixture
def bump2(ellipse):
    return Phantom([RadialBump((0.2, -0.1), 0.25, 1.0)], ellipse)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance verdicts collected by tests/test_acceptance.py."""
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(verdicts):
        terminalreporter.write_line(verdicts[key])
