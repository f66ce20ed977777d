"""
Script to generate the qubit Hamiltonian fixtures (H2 dissociation curve,
LiH with a frozen core, linear H4) in the plain text Hamiltonian format.

Needs OpenFermion and PySCF (pip install .[fixtures]).
"""

import os
import sys

import numpy as np
import openfermion as of
from openfermion.transforms import get_fermion_operator, jordan_wigner
from openfermionpyscf import run_pyscf

import qpvqe
from qpvqe.qpvqe_harness import write_hamiltonian


def qubit_hamiltonian(geometry, occupied=None, active=None):
    molecule = of.MolecularData(geometry, "sto-3g", 1, 0)
    molecule = run_pyscf(molecule, run_scf=True, run_fci=True)
    fermionic = molecule.get_molecular_hamiltonian(occupied_indices=occupied,
                                                   active_indices=active)
    qubit_op = jordan_wigner(get_fermion_operator(fermionic))
    n_qubits = of.count_qubits(qubit_op)
    terms = []
    for word, coefficient in qubit_op.terms.items():
        terms.append((complex(coefficient), qpvqe.PauliString(n_qubits, list(word))))
    h = qpvqe.PauliSum(n_qubits, terms).real()
    return h, molecule.fci_energy


if __name__=="__main__":

    outdir = sys.argv[1] if len(sys.argv) > 1 else "data/fixtures"
    if not os.path.isdir(outdir):
        os.makedirs(outdir)

    # H2, 0.5 to 3.0 Angstrom
    for R in np.arange(0.5, 3.05, 0.1):
        h, fci = qubit_hamiltonian([("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, R))])
        filename = os.path.join(outdir, "h2_%.2f.ham" % R)
        write_hamiltonian(h, filename)
        print("%s  FCI %.10f Ha" % (filename, fci))

    # LiH near equilibrium, 1s core frozen: 10 qubits
    h, fci = qubit_hamiltonian([("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 1.6))],
                               occupied=[0], active=[1, 2, 3, 4, 5])
    write_hamiltonian(h, os.path.join(outdir, "lih_1.60.ham"))
    print("lih_1.60.ham  FCI (all electrons) %.10f Ha" % fci)

    # linear H4, 1.0 Angstrom spacing: 8 qubits
    h, fci = qubit_hamiltonian([("H", (0.0, 0.0, 1.0 * i)) for i in range(4)])
    write_hamiltonian(h, os.path.join(outdir, "h4_1.00.ham"))
    print("h4_1.00.ham  FCI %.10f Ha" % fci)
