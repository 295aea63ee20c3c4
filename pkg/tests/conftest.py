import numpy as np
import pytest

from pnml_linreg import Dataset

LAMBDAS = (1e-4, 0.1, 1.0)


def random_dataset(rng, M, N, scale=1.0):
    return Dataset(scale * rng.standard_normal((N, M)), rng.standard_normal(N), n_features=M)


def random_instances(seed, count, lambdas=(0.0,) + LAMBDAS, max_m=8, max_n=20):
    """Yield ``(data, x, lam)``; lam = 0 instances always have N >= M."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        lam = lambdas[k % len(lambdas)]
        M = int(rng.integers(1, max_m + 1))
        lo = M if lam == 0 else 1
        N = int(rng.integers(lo, max(lo, max_n) + 1))
        data = random_dataset(rng, M, N)
        x = rng.standard_normal(M) * rng.uniform(0.2, 2.0)
        yield data, x, lam


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def one_point():
    """M=1, N=1, x1 = 1, y1 = 2."""
    return Dataset([[1.0]], [2.0])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
