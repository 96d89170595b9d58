import numpy as np
import pytest

from cherednik import JCParams

# parameter pairs used throughout the acceptance criteria
PAIRS = [(1.0, 0.5), (0.5, -0.25), (2.0, 1.0)]

BANK = {
    "gauss": lambda x: np.exp(-np.asarray(x, float) ** 2),
    "gauss2": lambda x: np.exp(-2.0 * np.asarray(x, float) ** 2),
    "xgauss": lambda x: np.asarray(x, float) * np.exp(-np.asarray(x, float) ** 2),
}


@pytest.fixture(params=PAIRS, ids=lambda ab: f"a{ab[0]}_b{ab[1]}")
def params(request):
    return JCParams(*request.param)


@pytest.fixture
def p105():
    return JCParams(1.0, 0.5)


@pytest.fixture
def p1025():
    return JCParams(1.0, 0.25)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
