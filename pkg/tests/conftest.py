import numpy as np
import pytest

from heunseries.catalog import sample_parameters
from heunseries.params import Gamma0

# (class, N) pairs used by several modules
SMALL_CASES = [(Gamma0.GAMMA, n) for n in range(3)] + [(Gamma0.ALPHA, n) for n in range(2)] + [(Gamma0.BETA, n) for n in range(2)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def params_for(gamma0, N, seed):
    return sample_parameters(np.random.default_rng([seed, 99, N]), gamma0, N)


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
