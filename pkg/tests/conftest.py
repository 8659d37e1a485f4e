from pathlib import Path

import numpy as np
import pytest

import maxvol
from maxvol import kernels
from maxvol.reduction import build_maxvol_instance, parse_dimacs, sat_to_labelcover

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure the algorithms."""
    A = np.eye(3)
    with maxvol.use_backend("numba"):
        kernels.subset_log2_volumes(A, 2, 1e-12)
        kernels.subset_log2_volumes(A.copy(), 2, 1e-12)
        ro = A.copy()
        ro.setflags(write=False)
        kernels.subset_log2_volumes(ro, 2, 1e-12)
        kernels.swap_log2_volumes(A, [0, 1], 1e-12)
        kernels.swap_log2_volumes(ro, [0, 1], 1e-12)
        kernels.jacobi_singular_values(A)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    with maxvol.use_backend(request.param):
        yield request.param


@pytest.fixture
def three_vectors():
    """e1, e2 and u = (sqrt(1 - eps^2), eps) with eps = 0.6."""
    return np.array([[1.0, 0.0, 0.8], [0.0, 1.0, 0.6]])


@pytest.fixture(scope="session")
def fixture_cnf():
    return parse_dimacs((DATA / "fixture_3sat5.cnf").read_text())


@pytest.fixture(scope="session")
def fixture_lc(fixture_cnf):
    return sat_to_labelcover(fixture_cnf)


@pytest.fixture(scope="session")
def fixture_inst(fixture_lc):
    return build_maxvol_instance(fixture_lc, 1)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria with runtime budgets")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
