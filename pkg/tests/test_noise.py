import io
import os

import numpy as np
import pytest

from conftest import DATA_DIR
from qpvqe.qpvqe_driver import build_problem, ensemble_energy, extract_eigenpairs, optimize
from qpvqe.qpvqe_errors import CalibrationError, DimensionMismatchError
from qpvqe.qpvqe_noise import (CalibrationData, DensityMatrix, ShotSampler, apply_depolarizing,
                               apply_kraus, apply_noisy_gate, apply_noisy_program,
                               apply_relaxation, depolarizing_kraus, format_calibration,
                               load_calibration, noisy_ensemble_energy, noisy_expectation,
                               noisy_objective, noisy_state_energies, parse_calibration,
                               pauli_expectation, thermal_relaxation_kraus, totally_mixed_energy,
                               zero_noise_calibration)
from qpvqe.qpvqe_other_functions import rng_stream
from qpvqe.qpvqe_parameter_files import QpvqeConfig
from qpvqe.qpvqe_pauli import PauliString, PauliSum, expectation, to_matrix
from qpvqe.qpvqe_state_prep import diagonal_energy, sector_determinants
from qpvqe.qpvqe_statevector import (StateVector, apply_program, cnot_gate, random_state,
                                     rotation_gate)

MANILA = os.path.join(DATA_DIR, "ibmq_manila.calib")


def random_density(n_qubits, rng, rank=3):
    vectors = rng.normal(size=(1 << n_qubits, rank)) + 1j * rng.normal(size=(1 << n_qubits, rank))
    matrix = vectors @ vectors.conj().T
    return DensityMatrix(n_qubits, matrix / np.trace(matrix))


def to_matrix_of(string):
    return to_matrix(PauliSum.from_string(string))


@pytest.fixture(scope="module")
def manila():
    return load_calibration(MANILA)


#############################
# calibration

def test_manila_table(manila):
    assert len(manila.qubits) == 5
    assert len(manila.pairs) == 4
    assert manila.gate_time_1q_ns == 35.6
    assert manila.qubit(2)["t2_us"] == pytest.approx(17.264)
    assert manila.pair(1, 0) == manila.pair(0, 1)
    assert not manila.is_noiseless()


def test_missing_entries_use_table_means(manila):
    mean = manila.qubit(5)
    assert mean["t1_us"] == pytest.approx(np.mean([20.931, 145.271, 74.739, 188.731, 138.941]))
    assert manila.pair(0, 4)["err_cnot"] == pytest.approx(np.mean([0.0076, 0.04386, 0.03558, 0.00628]))


def test_zero_noise_file_is_noiseless():
    calib = load_calibration(os.path.join(DATA_DIR, "zero_noise.calib"))
    assert calib.is_noiseless()
    assert calib.qubit(3)["t1_us"] == np.inf
    assert zero_noise_calibration(4).is_noiseless()


def test_calibration_text_survives_formatting(manila):
    again = parse_calibration(format_calibration(manila))
    assert again.qubits == manila.qubits
    assert again.pairs == manila.pairs


def test_load_from_open_file():
    calib = load_calibration(io.StringIO("qubit 0 t1_us=50 t2_us=40 freq_ghz=5 err_1q=1e-3\n"))
    assert calib.qubit(0)["err_1q"] == 1e-3


@pytest.mark.parametrize("text", [
    "qubit 0 t1_us=10 t2_us=30 freq_ghz=5 err_1q=0",      # T2 > 2 T1
    "qubit 0 t1_us=10 t2_us=10 freq_ghz=5 err_1q=1.5",    # error above one
    "qubit 0 t1_us=10 t2_us=10 freq_ghz=5",               # field missing
    "qubit 0 t1_us=-1 t2_us=1 freq_ghz=5 err_1q=0",
    "pair 0 1 err_cnot=0.01",
    "pair 0 1 err_cnot=0.01 time_ns=0",
    "qubit 0 t1_us=ten t2_us=10 freq_ghz=5 err_1q=0",
    "qubit 0 t1_us",
    "coupler 0 1",
    "gate_time_1q_ns 0",
])
def test_invalid_calibration(text):
    with pytest.raises(CalibrationError):
        parse_calibration(text)


@pytest.mark.parametrize("text", [
    "qubit x t1_us=100 t2_us=80 freq_ghz=5 err_1q=0",
    "pair 0 one err_cnot=0.01 time_ns=300",
])
def test_bad_qubit_index(text):
    with pytest.raises(CalibrationError, match="line 2: bad qubit index"):
        parse_calibration("gate_time_1q_ns 35\n" + text)


def test_calibration_errors_name_the_file(tmp_path):
    bad = tmp_path / "bad.calib"
    bad.write_text("qubit x t1_us=100 t2_us=80 freq_ghz=5 err_1q=0\n")
    with pytest.raises(CalibrationError) as info:
        load_calibration(str(bad))
    assert str(info.value).startswith("%s, line 1:" % bad)


#############################
# channels

@pytest.mark.parametrize("kraus", [
    depolarizing_kraus(0.3),
    depolarizing_kraus(0.05, 2),
    thermal_relaxation_kraus(300.0, 50.0, 30.0),
    thermal_relaxation_kraus(35.6, np.inf, np.inf),
])
def test_kraus_sets_are_complete(kraus):
    total = sum(k.conj().T @ k for k in kraus)
    np.testing.assert_allclose(total, np.eye(total.shape[0]), atol=1e-12)


def test_depolarizing_shortcut_matches_kraus(rng):
    rho = random_density(3, rng)
    direct = apply_depolarizing(rho.copy(), [0, 2], 0.2)
    kraus = apply_kraus(rho.copy(), depolarizing_kraus(0.2, 2), [0, 2])
    np.testing.assert_allclose(direct.matrix, kraus.matrix, atol=1e-12)
    direct.check(positive=True)


def test_depolarizing_on_ground_state():
    rho = apply_depolarizing(DensityMatrix(1), [0], 0.3)
    np.testing.assert_allclose(rho.matrix, np.diag([0.85, 0.15]), atol=1e-15)


def test_thermal_relaxation_populations_and_coherence():
    calib = CalibrationData(qubits={0: {"t1_us": 2.0, "t2_us": 1.5, "freq_ghz": 5.0, "err_1q": 0.0}})
    excited = DensityMatrix(1, np.diag([0, 1]))
    apply_relaxation(excited, 0, 1000.0, calib)
    assert excited.matrix[1, 1].real == pytest.approx(np.exp(-0.5))
    plus = DensityMatrix(1, np.full((2, 2), 0.5))
    apply_relaxation(plus, 0, 1000.0, calib)
    assert abs(plus.matrix[0, 1]) == pytest.approx(0.5 * np.exp(-1.0 / 1.5))


def test_rz_is_noiseless(manila):
    plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    rho = apply_noisy_gate(DensityMatrix.from_state(plus), rotation_gate("RZ", 0, 0.7), manila)
    ideal = apply_program(plus.copy(), [rotation_gate("RZ", 0, 0.7)])
    np.testing.assert_allclose(rho.matrix, DensityMatrix.from_state(ideal).matrix, atol=1e-14)


def test_noisy_gates_keep_a_valid_density_matrix(manila, rng):
    rho = DensityMatrix.from_state(random_state(3, rng))
    gates = [rotation_gate("RX", 0, 0.4), cnot_gate(0, 1), cnot_gate(2, 1), rotation_gate("RY", 2, 1.1)]
    apply_noisy_program(rho, gates, manila)
    rho.check(positive=True)
    assert np.real(np.trace(rho.matrix @ rho.matrix)) < 1.0


def test_density_matrix_checks():
    DensityMatrix.maximally_mixed(2).check(positive=True)
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(1, np.diag([1.0, 1.0])).check()
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(2, np.eye(2))


#############################
# expectations

def test_pauli_expectation_on_leading_qubits(rng):
    state = random_state(3, rng)
    rho = DensityMatrix.from_state(state)
    string = PauliString.from_label(2, "X0 Y1")
    expected = np.vdot(state.amplitudes, np.kron(to_matrix_of(string), np.eye(2)) @ state.amplitudes).real
    assert pauli_expectation(string, rho) == pytest.approx(expected, abs=1e-12)


def test_noisy_expectation_of_pure_state(h2, rng):
    state = random_state(4, rng)
    assert noisy_expectation(h2, DensityMatrix.from_state(state)) == pytest.approx(expectation(h2, state), abs=1e-12)


def test_totally_mixed_energy(h2):
    assert totally_mixed_energy(h2) == pytest.approx(-0.04207897647782276)
    assert totally_mixed_energy(h2) == pytest.approx(np.trace(to_matrix(h2)).real / 16)
    dets = sector_determinants(4, 2, 0.0)
    assert totally_mixed_energy(h2, (2, 0.0)) == pytest.approx(np.mean([diagonal_energy(h2, d) for d in dets]))
    assert noisy_expectation(h2, DensityMatrix.maximally_mixed(4)) == pytest.approx(totally_mixed_energy(h2))


#############################
# sampling

def test_shot_sampler():
    exact = ShotSampler(0)
    assert exact.exact and exact.sample_pauli(0.37) == 0.37
    sampler = ShotSampler(10000, np.random.default_rng(1))
    draws = [sampler.sample_pauli(0.2) for _ in range(50)]
    assert abs(np.mean(draws) - 0.2) < 0.01
    assert all(-1.0 <= d <= 1.0 for d in draws)
    assert ShotSampler(10, np.random.default_rng(2)).sample_pauli(1.0) == 1.0
    with pytest.raises(ValueError):
        ShotSampler(-1)


def test_sampler_leaves_identity_exact():
    constant = PauliSum.identity(4, -0.5)
    sampler = ShotSampler(1, np.random.default_rng(3))
    assert sampler.estimate(constant, DensityMatrix.maximally_mixed(4)) == pytest.approx(-0.5)


#############################
# noisy energies

@pytest.mark.parametrize("method", ["ladder", "auto"])
def test_zero_noise_matches_statevector(h2, h2_problem, rng, method):
    circuit, prep = h2_problem
    calib = zero_noise_calibration(prep.n_qubits)
    theta = rng.uniform(-1, 1, circuit.parameter_count)
    noisy = noisy_ensemble_energy(h2, circuit, prep, theta, calib, method=method)
    assert noisy == pytest.approx(ensemble_energy(h2, circuit, prep, theta), abs=1e-12)
    energies, _ = extract_eigenpairs(circuit, theta, prep.refs, h2)
    per_state = noisy_state_energies(h2, circuit, prep.refs, theta, calib, method=method)
    np.testing.assert_allclose(per_state, energies, atol=1e-12)


def test_noise_raises_the_ensemble_energy(h2, h2_ed, manila):
    config = QpvqeConfig(excitations=[(0, 1, 2, 3), (0, 3, 1, 2)], n_particles=2, sz=0.0)
    circuit, prep = build_problem(h2, config)
    theta = np.zeros(circuit.parameter_count)
    noisy = noisy_ensemble_energy(h2, circuit, prep, theta, manila)
    assert noisy > ensemble_energy(h2, circuit, prep, theta)
    assert noisy > np.dot(prep.weights.w, h2_ed.energies)


@pytest.mark.slow
def test_noisy_spsa_plateau(h2, h2_ed, manila):
    config = QpvqeConfig.read(os.path.join(DATA_DIR, "h2_noisy.param"))
    circuit, prep = build_problem(h2, config)
    sampler = ShotSampler(config.shots, rng_stream(config.seed, 1))
    objective = noisy_objective(h2, circuit, prep, manila, sampler, config.compile_method)
    result = optimize(h2, circuit, prep, config, objective=objective, rng=rng_stream(config.seed, 0))
    plateau = np.mean(result.ensemble_trace[-100:])
    exact = np.dot(prep.weights.w, h2_ed.energies)
    assert exact < plateau < totally_mixed_energy(h2)
