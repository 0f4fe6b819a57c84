import numpy as np
import pytest

from redsbo.benchmarks import get_benchmark, make_problem
from redsbo.domain import Box, RngSeed, discretize
from redsbo.kernels import SquaredExponential


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def branin_problem():
    return make_problem(get_benchmark("branin"), 2000, RngSeed(0, 2_000_000))


@pytest.fixture(scope="session")
def noise_free_branin():
    return make_problem(get_benchmark("branin", sigma_noise=0.0), 2000, RngSeed(0, 2_000_000))


@pytest.fixture
def se():
    return SquaredExponential(0.2)


@pytest.fixture
def small_domain():
    return discretize(Box.unit(2), 200, RngSeed(7, 0))


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
