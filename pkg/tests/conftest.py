import numpy as np
import pytest

from grazeharvest import GridSpec, ModelParams, solve_state

# PASS/FAIL lines collected by the acceptance tests
ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def params():
    """Canonical configuration: lambda=500, K=20, c=0.5, q=1, H=0.3, B1=1, B2=2."""
    return ModelParams()


@pytest.fixture(scope="session")
def grid():
    return GridSpec.interval(257)


@pytest.fixture(scope="session")
def coarse_grid():
    return GridSpec.interval(65)


@pytest.fixture(scope="session")
def u_zero(grid, params):
    return solve_state(0.0, grid, params).u


@pytest.fixture(scope="session")
def u_full(grid, params):
    return solve_state(params.H, grid, params).u


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def random_control(rng, grid, H, smooth=False):
    if not smooth:
        return rng.uniform(0.0, H, grid.size)
    x = grid.coords()[0]
    coef = rng.uniform(-1, 1, 4)
    raw = sum(c * np.cos((k + 1) * np.pi * x) for k, c in enumerate(coef))
    return H * (raw - raw.min()) / (raw.max() - raw.min())


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
