import pytest

from qplane.solver import build_system, classify, solve
from qplane.solver.oracle import oracle_orbits


@pytest.fixture(scope="session")
def system2():
    return build_system(2)


@pytest.fixture(scope="session")
def solved2(system2):
    return solve(system2)


@pytest.fixture(scope="session")
def report2(solved2):
    return classify(solved2.orbits)


@pytest.fixture(scope="session")
def oracle2():
    return oracle_orbits(2)



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
