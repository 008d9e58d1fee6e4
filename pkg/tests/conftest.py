from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from ncptm.elimination import eliminate, system_for
from ncptm.fragment import DataTable, predict, square_fragment, stabilizer_qubit_fragment
from ncptm.program import certify, program_for

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def stab():
    return stabilizer_qubit_fragment()


@pytest.fixture(scope="session")
def stab_program(stab):
    """(identities, phi, psi, skeleton) for the stabilizer scenario."""
    return program_for(stab)


@pytest.fixture(scope="session")
def stab_quantum(stab):
    return predict(stab)


@pytest.fixture(scope="session")
def stab_depolarized(stab):
    return DataTable.constant(stab, Fraction(1, 2))


@pytest.fixture(scope="session")
def stab_cert(stab_program, stab_quantum):
    return certify(stab_program[3].with_data(stab_quantum))


@pytest.fixture(scope="session")
def toy():
    return square_fragment()


@pytest.fixture(scope="session")
def toy_program(toy):
    return program_for(toy)


@pytest.fixture(scope="session")
def toy_elimination(toy):
    return eliminate(system_for(toy))


@pytest.fixture(scope="session")
def toy_elimination_flag(toy):
    return eliminate(system_for(toy, flag=True))
