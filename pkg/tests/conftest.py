import numpy as np
import pytest

from adacat.numkit import Rng
from adacat.problems import gen_quadratic, load_bundled_subset, logistic_problem


@pytest.fixture(scope="session")
def quad50():
    return gen_quadratic(50, Rng(0))


@pytest.fixture(scope="session")
def quad20():
    return gen_quadratic(20, Rng(7))


@pytest.fixture(scope="session")
def bundled():
    return load_bundled_subset()


@pytest.fixture(scope="session")
def logit(bundled):
    return logistic_problem(bundled)


def quad(A):
    from adacat.problems import QuadraticProblem, QuadraticOracle
    return QuadraticOracle(QuadraticProblem(A=np.atleast_2d(np.asarray(A, dtype=float))))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
