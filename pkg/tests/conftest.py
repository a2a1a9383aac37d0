import numpy as np
import pytest

from bicagg import _backend
from bicagg.core import Bicluster, Solution

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_bicluster(rng, n, m, max_rows=None, max_cols=None):
    nr = int(rng.integers(1, (max_rows or n) + 1))
    nc = int(rng.integers(1, (max_cols or m) + 1))
    return Bicluster(rng.choice(n, nr, replace=False), rng.choice(m, nc, replace=False))


def random_solution(rng, q, n, m, **kw):
    return Solution([random_bicluster(rng, n, m, **kw) for _ in range(q)], (n, m))
