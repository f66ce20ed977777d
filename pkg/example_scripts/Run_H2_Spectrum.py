"""
Script to compute the four lowest S_z = 0 states of H2 at 0.70 Angstrom in
one QP-VQE run, and to compare them with exact diagonalization.
"""

import logging

import numpy as np
import qpvqe
from qpvqe.qpvqe_harness import ed_sector, subspace_fidelity
from qpvqe.qpvqe_observables import all_gaps


if __name__=="__main__":

    logging.basicConfig(level=logging.INFO)

    h = qpvqe.load_hamiltonian("data/h2_0.70.ham")
    config = qpvqe.QpvqeConfig.read("data/h2_spectrum.param")

    # EXACT REFERENCE
    ed = qpvqe.exact_diagonalize(h, ed_sector(h, config), config.n_states)

    # QP-VQE
    circuit, prep = qpvqe.build_problem(h, config)
    result = qpvqe.optimize(h, circuit, prep, config, ed_energies=ed.energies, progress=True)
    print(result.summary())
    print("fidelities:", np.array2string(subspace_fidelity(ed, result.states), precision=6))

    # GAPS FROM THE ANCILLA
    print(all_gaps(result, h, circuit))
