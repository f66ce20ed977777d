__all__ = ['PauliString', 'PauliSum', 'multiply', 'add_simplify', 'expectation', 'to_matrix',
           'StateVector', 'GateOp', 'init_basis', 'apply_gate', 'apply_pauli_exponential',
           'inner_product', 'fidelity',
           'FermionTerm', 'ExcitationGenerator', 'jordan_wigner', 'enumerate_sz_excitations',
           'AnsatzCircuit', 'build_uccgsd', 'apply_ansatz', 'gradient',
           'WeightVector', 'ReferenceSet', 'PurifiedPrep', 'default_weights',
           'compressed_cascade', 'isometry_network', 'prepare_purified',
           'SpectrumResult', 'build_problem', 'ensemble_energy', 'optimize', 'run_qpvqe',
           'extract_eigenpairs', 'error_bound',
           'PairState', 'prepare_pair', 'energy_gap', 'gap_from_full_purified',
           'transition_amplitude', 'transition_from_full_purified',
           'CalibrationData', 'DensityMatrix', 'ShotSampler', 'load_calibration',
           'apply_noisy_gate', 'noisy_ensemble_energy', 'spsa_optimize',
           'parse_hamiltonian', 'load_hamiltonian', 'exact_diagonalize', 'EDReference',
           'QpvqeConfig', 'QpvqeError', 'run_cli'
           ]

from .qpvqe_errors import QpvqeError
from .qpvqe_pauli import PauliString, PauliSum, multiply, add_simplify, expectation, to_matrix
from .qpvqe_statevector import StateVector, GateOp, init_basis, apply_gate, apply_pauli_exponential, \
    inner_product, fidelity
from .qpvqe_fermion import FermionTerm, ExcitationGenerator, jordan_wigner, enumerate_sz_excitations
from .qpvqe_ansatz import AnsatzCircuit, build_uccgsd, apply_ansatz, gradient
from .qpvqe_state_prep import WeightVector, ReferenceSet, PurifiedPrep, default_weights, \
    compressed_cascade, isometry_network, prepare_purified
from .qpvqe_parameter_files import QpvqeConfig
from .qpvqe_driver import SpectrumResult, build_problem, ensemble_energy, optimize, run_qpvqe, \
    extract_eigenpairs, error_bound
from .qpvqe_observables import PairState, prepare_pair, energy_gap, gap_from_full_purified, \
    transition_amplitude, transition_from_full_purified
from .qpvqe_noise import CalibrationData, DensityMatrix, ShotSampler, load_calibration, \
    apply_noisy_gate, noisy_ensemble_energy, spsa_optimize
from .qpvqe_harness import parse_hamiltonian, load_hamiltonian, exact_diagonalize, EDReference
from .qpvqe_cli import run_cli


from . import qpvqe_hdf5
__all__.extend(['qpvqe_hdf5'])
