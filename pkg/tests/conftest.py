import random

import pytest

from amenvelope.core import GeneratorList, SemigroupSpec, make_oracle

Z3_TABLE = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]

_acceptance_lines = []


def record_acceptance(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def z3():
    return make_oracle(SemigroupSpec.cayley_table(Z3_TABLE))


@pytest.fixture
def z6():
    return make_oracle(SemigroupSpec.cayley_table(
        [[(i + j) % 6 for j in range(6)] for i in range(6)]))


@pytest.fixture
def free2():
    return make_oracle(SemigroupSpec.free(2))


@pytest.fixture
def free1():
    return make_oracle(SemigroupSpec.free(1))


@pytest.fixture
def naturals():
    return make_oracle(SemigroupSpec.naturals_additive())


@pytest.fixture
def left_zero():
    return make_oracle(SemigroupSpec.left_zero())


@pytest.fixture
def trans2():
    return make_oracle(SemigroupSpec.transformations(2, [[1, 0], [0, 0]]))


@pytest.fixture
def full_t3():
    # All 27 self-maps of {0, 1, 2} as generators.
    maps = [[a, b, c] for a in range(3) for b in range(3) for c in range(3)]
    return make_oracle(SemigroupSpec.transformations(3, maps))


@pytest.fixture
def rng():
    return random.Random(20261018)


def gens_of(*keys):
    return GeneratorList(list(keys))
