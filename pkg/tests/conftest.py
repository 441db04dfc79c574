import numpy as np
import pytest

from weylkit.potential import PotentialPath, potential_family

PHI2 = [[0.5, 0.2], [0.2, -0.3]]
PHI2C = [[0.4, 0.3 - 0.2j], [0.3 + 0.2j, -0.2]]

# family -> parameters per matrix size
CORPUS_PARAMS = {
    "zero": {1: {}, 2: {}},
    "constant": {1: {"value": 1.0}, 2: {"value": PHI2}},
    "step": {1: {"value": 0.8, "x_jump": 0.7, "value2": -0.4}, 2: {"value": PHI2C, "x_jump": 0.7, "value2": 0.0}},
    "gaussian-decay": {1: {"amplitude": 1.2, "width": 0.5}, 2: {"amplitude": PHI2C, "width": 0.6}},
}


def corpus_path(name, m, X=2.0, N=256):
    f = potential_family(name, m, **CORPUS_PARAMS[name][m])
    return PotentialPath.from_function(f, X, N, m)


def corpus():
    return [(name, m, corpus_path(name, m)) for name in CORPUS_PARAMS for m in (1, 2)]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


def random_upper(rng, n, re=(-4.0, 4.0), im=(0.2, 3.0)):
    return rng.uniform(*re, n) + 1j * rng.uniform(*im, n)


# -- acceptance summary ----------------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
