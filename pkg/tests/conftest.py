import os

import numpy as np
import pytest

from qpvqe.qpvqe_driver import build_problem, optimize
from qpvqe.qpvqe_fermion import FermionTerm, jordan_wigner
from qpvqe.qpvqe_harness import ed_sector, exact_diagonalize, load_hamiltonian
from qpvqe.qpvqe_parameter_files import QpvqeConfig

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")
FIXTURE_DIR = os.path.join(DATA_DIR, "fixtures")
H2_FILE = os.path.join(DATA_DIR, "h2_0.70.ham")

CHEMICAL_ACCURACY = 1.6e-3


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long fixture runs (deselect with -m 'not slow')")


def fixture_path(name):
    """Path of a shipped Hamiltonian fixture under data/fixtures."""
    return os.path.join(FIXTURE_DIR, name)


def random_sector_hamiltonian(n_spatial, rng, n_doubles=3):
    """
    Random real Hamiltonian that conserves N and S_z: equal-spin one-body
    hoppings plus a few spin-conserving two-body terms, each with its
    adjoint.
    """
    n_modes = 2 * n_spatial
    terms = []
    for p in range(n_modes):
        for q in range(p, n_modes):
            if p % 2 != q % 2:
                continue
            term = FermionTerm(rng.normal(), [(p, True), (q, False)])
            terms.append(term)
            if p != q:
                terms.append(term.adjoint())
    added = 0
    while added < n_doubles:
        p, q, r, s = rng.choice(n_modes, size=4, replace=False)
        if (p % 2) + (q % 2) != (r % 2) + (s % 2):
            continue
        term = FermionTerm(0.5 * rng.normal(), [(p, True), (q, True), (r, False), (s, False)])
        terms.extend([term, term.adjoint()])
        added += 1
    return jordan_wigner(terms, n_modes).real()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def h2():
    return load_hamiltonian(H2_FILE)


@pytest.fixture(scope="session")
def h2_config():
    return QpvqeConfig(n_states=4, weights=[0.4, 0.3, 0.2, 0.1], n_particles=2, sz=0.0)


@pytest.fixture(scope="session")
def h2_ed(h2, h2_config):
    return exact_diagonalize(h2, ed_sector(h2, h2_config), 4)


@pytest.fixture(scope="session")
def h2_problem(h2, h2_config):
    return build_problem(h2, h2_config)


@pytest.fixture(scope="session")
def h2_run(h2, h2_config, h2_problem, h2_ed):
    """One converged noiseless H2 run shared by the whole session."""
    circuit, prep = h2_problem
    return optimize(h2, circuit, prep, h2_config, ed_energies=h2_ed.energies)
