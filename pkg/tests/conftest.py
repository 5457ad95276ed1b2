import numpy as np
import pytest

from chiralpump.lindblad import DecoherenceParams
from chiralpump.model import default_params

ACCEPTANCE_LINES = []


def fig3_rates(**changes):
    rates = dict(gamma31=0.1, gamma32=0.1, gamma21=1.0, gamma_dephase=1.0)
    rates.update(changes)
    return DecoherenceParams.from_mhz(**rates)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def params():
    return default_params()


@pytest.fixture
def rates():
    return fig3_rates()


@pytest.fixture
def rng():
    return np.random.default_rng(20201)


@pytest.fixture
def record_criterion():
    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
