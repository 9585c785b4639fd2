import numpy as np
import pytest

from invscat import (
    PotentialSpec,
    RegularizationConfig,
    WavenumberGrid,
    generate_dataset,
    partition_cube,
    sample_potential,
    sphere_directions,
)

ALPHA0 = np.array([1.0, 0.0, 0.0])

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def unit_grid():
    return partition_cube((0, 0, 0), 1.0, 10)


@pytest.fixture(scope="session")
def table_wavenumbers():
    return WavenumberGrid.uniform(50.0, 100.0, 11)


@pytest.fixture(scope="session")
def solver_config():
    return RegularizationConfig()


def _dataset(grid, spec, ks):
    q = sample_potential(spec, grid)
    data = generate_dataset(grid, q, sphere_directions(grid.size), ks.candidates, ALPHA0)
    return q, data


@pytest.fixture(scope="session")
def constant_case(unit_grid, table_wavenumbers):
    """q = 10 on the unit cube, P = 1000, 11 wavenumbers in [50, 100]."""
    return _dataset(unit_grid, PotentialSpec.constant(10.0), table_wavenumbers)


@pytest.fixture(scope="session")
def yukawa_case(unit_grid, table_wavenumbers):
    return _dataset(unit_grid, PotentialSpec.yukawa(), table_wavenumbers)
