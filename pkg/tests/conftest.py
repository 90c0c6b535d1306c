import pytest

from expander_forge import build_hypergraph, sample_generators
from expander_forge.budgets import Budgets

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line("  " + line)


@pytest.fixture(scope="session")
def gens_r3_t8():
    return sample_generators(t=8, size=6, r=3, seed=7)


@pytest.fixture(scope="session")
def H_r3_t8(gens_r3_t8):
    return build_hypergraph(gens_r3_t8)


@pytest.fixture(scope="session")
def gens_r3_t6_s5():
    return sample_generators(t=6, size=5, r=3, seed=3)


@pytest.fixture(scope="session")
def H_r3_t6_s5(gens_r3_t6_s5):
    return build_hypergraph(gens_r3_t6_s5)


@pytest.fixture(scope="session")
def gens_r3_t6_s4():
    return sample_generators(t=6, size=4, r=3, seed=2)


@pytest.fixture(scope="session")
def gens_r4_t7_s7():
    return sample_generators(t=7, size=7, r=4, seed=11)


@pytest.fixture(scope="session")
def gens_r4_t10_s8():
    return sample_generators(t=10, size=8, r=4, seed=21)


@pytest.fixture(scope="session")
def H_r4_t10_s8(gens_r4_t10_s8):
    return build_hypergraph(gens_r4_t10_s8, budgets=Budgets(max_tuples=1 << 27))


@pytest.fixture(scope="session")
def gens_r3_walk():
    # |S| >= 3 * family size, the regime where every walk route is populated
    return sample_generators(t=12, size=9, r=3, seed=1)


@pytest.fixture(scope="session")
def gens_r4_walk():
    return sample_generators(t=24, size=21, r=4, seed=4)
