#--------------------------------#
# qpvqe_noise.py
#--------------------------------#
"""
Density matrix simulation under a calibration-driven gate noise model,
shot-sampled energies and the SPSA optimizer used for noisy runs.

Every noisy gate is its ideal unitary, followed by a depolarizing channel on
its operands with the calibrated gate error, followed by thermal relaxation
of each operand over the gate duration. RZ is a frame change and carries no
noise. Readout errors are not modelled.
"""

import itertools
import logging

import numpy as np

from .qpvqe_ansatz import native_program
from .qpvqe_errors import CalibrationError, DimensionMismatchError, DivergenceError
from .qpvqe_other_functions import progress as progress_bar
from .qpvqe_pauli import pauli_action
from .qpvqe_state_prep import diagonal_energy, sector_determinants
from .qpvqe_statevector import (apply_gate_array, apply_matrix_array,
                                decompose_pauli_rotation, x_gate)

logger = logging.getLogger(__name__)

DEFAULT_GATE_TIME_1Q_NS = 35.6
TRACE_TOL = 1.0e-10
HERMITIAN_TOL = 1.0e-10
PSD_TOL = 1.0e-8

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = (_I, _X, _Y, _Z)


#############################
# Calibration

_QUBIT_FIELDS = ("t1_us", "t2_us", "freq_ghz", "err_1q")
_PAIR_FIELDS = ("err_cnot", "time_ns")


class CalibrationData(object):
    """
    Per-qubit T1, T2 (microseconds), frequency (GHz) and single-qubit gate
    error; per coupled pair CNOT error and duration (ns); one single-qubit
    gate duration. Qubits or pairs absent from the table get the table
    means.
    """

    def __init__(self, *args, **kwargs):

        self.qubits = kwargs.get("qubits")
        self.pairs = kwargs.get("pairs")
        self.gate_time_1q_ns = kwargs.get("gate_time_1q_ns")
        self.name = kwargs.get("name")

        if (self.qubits is None):
            self.qubits = {}
        if (self.pairs is None):
            self.pairs = {}
        if (self.gate_time_1q_ns is None):
            self.gate_time_1q_ns = DEFAULT_GATE_TIME_1Q_NS

        self.pairs = dict((tuple(sorted(key)), value) for key, value in self.pairs.items())
        self._warned = set()
        self.validate()

    def validate(self):
        if not self.gate_time_1q_ns > 0:
            raise CalibrationError("gate_time_1q_ns must be positive")
        for q, record in self.qubits.items():
            for field in _QUBIT_FIELDS:
                if field not in record:
                    raise CalibrationError("qubit %d: missing %s" % (q, field))
            t1, t2 = record["t1_us"], record["t2_us"]
            if not (t1 > 0 and t2 > 0):
                raise CalibrationError("qubit %d: T1 and T2 must be positive" % q)
            if np.isfinite(t2) and t2 > 2.0 * t1:
                raise CalibrationError("qubit %d: T2 = %g exceeds 2 T1 = %g" % (q, t2, 2.0 * t1))
            if np.isinf(t2) and np.isfinite(t1):
                raise CalibrationError("qubit %d: infinite T2 needs infinite T1" % q)
            if not 0.0 <= record["err_1q"] <= 1.0:
                raise CalibrationError("qubit %d: err_1q = %g outside [0, 1]" % (q, record["err_1q"]))
        for pair, record in self.pairs.items():
            for field in _PAIR_FIELDS:
                if field not in record:
                    raise CalibrationError("pair %d-%d: missing %s" % (pair[0], pair[1], field))
            if not 0.0 <= record["err_cnot"] <= 1.0:
                raise CalibrationError("pair %d-%d: err_cnot = %g outside [0, 1]" % (pair[0], pair[1], record["err_cnot"]))
            if not record["time_ns"] > 0:
                raise CalibrationError("pair %d-%d: time_ns must be positive" % pair)

    def _mean_qubit(self):
        if not self.qubits:
            return {"t1_us": np.inf, "t2_us": np.inf, "freq_ghz": 0.0, "err_1q": 0.0}
        mean = {}
        for field in _QUBIT_FIELDS:
            values = np.array([record[field] for record in self.qubits.values()], dtype=float)
            finite = values[np.isfinite(values)]
            mean[field] = float(finite.mean()) if finite.size == values.size else np.inf
        return mean

    def _mean_pair(self):
        if not self.pairs:
            return {"err_cnot": 0.0, "time_ns": 2 * self.gate_time_1q_ns}
        return dict((field, float(np.mean([record[field] for record in self.pairs.values()])))
                    for field in _PAIR_FIELDS)

    def qubit(self, q):
        if q in self.qubits:
            return self.qubits[q]
        if ("q", q) not in self._warned:
            logger.warning("qubit %d not in calibration table, using mean values", q)
            self._warned.add(("q", q))
        return self._mean_qubit()

    def pair(self, a, b):
        key = tuple(sorted((a, b)))
        if key in self.pairs:
            return self.pairs[key]
        if ("p",) + key not in self._warned:
            logger.warning("pair %d-%d not in calibration table, using mean values", key[0], key[1])
            self._warned.add(("p",) + key)
        return self._mean_pair()

    def is_noiseless(self):
        for record in self.qubits.values():
            if record["err_1q"] > 0 or np.isfinite(record["t1_us"]) or np.isfinite(record["t2_us"]):
                return False
        return all(record["err_cnot"] == 0 for record in self.pairs.values())

    def __repr__(self):
        return "CalibrationData(%s: %d qubits, %d pairs)" % (self.name, len(self.qubits), len(self.pairs))


def _parse_float(text, where):
    try:
        return float(text)
    except ValueError:
        raise CalibrationError("%s: bad number '%s'" % (where, text))


def _parse_index(text, where):
    try:
        return int(text)
    except ValueError:
        raise CalibrationError("%s: bad qubit index '%s'" % (where, text))


def _parse_fields(words, where):
    fields = {}
    for word in words:
        if "=" not in word:
            raise CalibrationError("%s: expected key=value, got '%s'" % (where, word))
        key, value = word.split("=", 1)
        fields[key] = _parse_float(value, where)
    return fields


def parse_calibration(text, name=None):
    """
    Lines 'gate_time_1q_ns <f>', 'qubit <q> t1_us=<f> t2_us=<f> freq_ghz=<f>
    err_1q=<f>' and 'pair <q0> <q1> err_cnot=<f> time_ns=<f>'; '#' starts a
    comment; 'inf' is accepted for T1 and T2.
    """
    qubits = {}
    pairs = {}
    gate_time = None
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        where = "line %d" % number if name is None else "%s, line %d" % (name, number)
        words = line.split()
        keyword = words[0]
        if keyword == "gate_time_1q_ns":
            if len(words) != 2:
                raise CalibrationError("%s: gate_time_1q_ns takes one value" % where)
            gate_time = _parse_float(words[1], where)
        elif keyword == "qubit":
            if len(words) < 2:
                raise CalibrationError("%s: qubit index missing" % where)
            qubits[_parse_index(words[1], where)] = _parse_fields(words[2:], where)
        elif keyword == "pair":
            if len(words) < 3:
                raise CalibrationError("%s: pair needs two qubit indices" % where)
            key = tuple(sorted((_parse_index(words[1], where), _parse_index(words[2], where))))
            pairs[key] = _parse_fields(words[3:], where)
        else:
            raise CalibrationError("%s: unknown record '%s'" % (where, keyword))
    return CalibrationData(qubits=qubits, pairs=pairs, gate_time_1q_ns=gate_time, name=name)


def load_calibration(source):
    """Read a calibration file (path or open file)."""
    if hasattr(source, "read"):
        return parse_calibration(source.read(), name=getattr(source, "name", None))
    with open(source) as f:
        return parse_calibration(f.read(), name=str(source))


def format_calibration(calib):
    lines = ["gate_time_1q_ns %.17g" % calib.gate_time_1q_ns]
    for q in sorted(calib.qubits):
        record = calib.qubits[q]
        lines.append("qubit %d %s" % (q, " ".join("%s=%.17g" % (f, record[f]) for f in _QUBIT_FIELDS)))
    for pair in sorted(calib.pairs):
        record = calib.pairs[pair]
        lines.append("pair %d %d %s" % (pair[0], pair[1], " ".join("%s=%.17g" % (f, record[f]) for f in _PAIR_FIELDS)))
    return "\n".join(lines) + "\n"


def zero_noise_calibration(n_qubits=0, gate_time_1q_ns=DEFAULT_GATE_TIME_1Q_NS):
    qubits = dict((q, {"t1_us": np.inf, "t2_us": np.inf, "freq_ghz": 0.0, "err_1q": 0.0})
                  for q in range(n_qubits))
    pairs = dict(((q, q + 1), {"err_cnot": 0.0, "time_ns": 2 * gate_time_1q_ns})
                 for q in range(n_qubits - 1))
    return CalibrationData(qubits=qubits, pairs=pairs, gate_time_1q_ns=gate_time_1q_ns, name="zero-noise")


#############################
# Density matrices

class DensityMatrix(object):

    def __init__(self, n_qubits, matrix=None):
        self.n_qubits = int(n_qubits)
        dim = 1 << self.n_qubits
        if matrix is None:
            matrix = np.zeros((dim, dim), dtype=complex)
            matrix[0, 0] = 1.0
        matrix = np.ascontiguousarray(matrix, dtype=complex)
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError("%r matrix for %d qubits" % (matrix.shape, self.n_qubits))
        self.matrix = matrix

    @classmethod
    def from_state(cls, state):
        amplitudes = state.amplitudes
        return cls(state.n_qubits, np.outer(amplitudes, amplitudes.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits):
        dim = 1 << n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)

    def copy(self):
        return DensityMatrix(self.n_qubits, self.matrix.copy())

    def trace(self):
        return complex(np.trace(self.matrix))

    def probabilities(self):
        return np.real(np.diag(self.matrix)).copy()

    def check(self, positive=False):
        if abs(self.trace() - 1.0) > TRACE_TOL:
            raise DimensionMismatchError("density matrix trace %.3e deviates from 1" % abs(self.trace()))
        if np.max(np.abs(self.matrix - self.matrix.conj().T)) > HERMITIAN_TOL:
            raise DimensionMismatchError("density matrix is not Hermitian")
        if positive:
            lowest = np.linalg.eigvalsh(self.matrix)[0]
            if lowest < -PSD_TOL:
                raise DimensionMismatchError("density matrix eigenvalue %.3e is negative" % lowest)

    def __repr__(self):
        return "DensityMatrix(%d qubits)" % self.n_qubits


def _sandwich(matrix, apply_left):
    """A rho A^dagger given rho -> A rho."""
    left = apply_left(matrix.copy())
    return np.ascontiguousarray(apply_left(np.ascontiguousarray(left.conj().T)).conj().T)


def apply_kraus(rho, kraus, qubits):
    """sum_k K rho K^dagger for Kraus matrices acting on `qubits`."""
    n = rho.n_qubits
    out = np.zeros_like(rho.matrix)
    for operator in kraus:
        out += _sandwich(rho.matrix, lambda m: apply_matrix_array(m, n, operator, qubits))
    rho.matrix = out
    return rho


#############################
# Channels

def depolarizing_kraus(p, n_qubits=1):
    """rho -> (1 - p) rho + p 1/d: Paulis weighted p/d^2, identity 1 - p (d^2 - 1)/d^2."""
    if not 0.0 <= p <= 1.0:
        raise CalibrationError("depolarizing rate %g outside [0, 1]" % p)
    d2 = 4 ** n_qubits
    kraus = []
    for letters in itertools.product(range(4), repeat=n_qubits):
        operator = np.array([[1.0 + 0j]])
        for letter in letters:
            operator = np.kron(operator, _PAULIS[letter])
        if any(letters):
            kraus.append(np.sqrt(p / d2) * operator)
        else:
            kraus.append(np.sqrt(1.0 - p * (d2 - 1) / d2) * operator)
    return kraus


def amplitude_damping_kraus(p1):
    return [np.array([[1, 0], [0, np.sqrt(1.0 - p1)]], dtype=complex),
            np.array([[0, np.sqrt(p1)], [0, 0]], dtype=complex)]


def phase_damping_kraus(lam):
    return [np.array([[1, 0], [0, np.sqrt(1.0 - lam)]], dtype=complex),
            np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex)]


def relaxation_rates(t_ns, t1_us, t2_us):
    """
    (p1, lambda) for a duration t: p1 = 1 - exp(-t/T1) and
    lambda = 1 - exp(-2t/T_phi) with 1/T_phi = 1/T2 - 1/(2 T1).
    """
    t_us = t_ns * 1.0e-3
    p1 = 0.0 if np.isinf(t1_us) else 1.0 - np.exp(-t_us / t1_us)
    inv_t1 = 0.0 if np.isinf(t1_us) else 1.0 / t1_us
    inv_t2 = 0.0 if np.isinf(t2_us) else 1.0 / t2_us
    inv_tphi = max(inv_t2 - 0.5 * inv_t1, 0.0)
    lam = 1.0 - np.exp(-2.0 * t_us * inv_tphi)
    return p1, lam


def thermal_relaxation_kraus(t_ns, t1_us, t2_us):
    """Amplitude damping followed by pure dephasing, as one Kraus list."""
    p1, lam = relaxation_rates(t_ns, t1_us, t2_us)
    return [b @ a for a in amplitude_damping_kraus(p1) for b in phase_damping_kraus(lam)]


def apply_depolarizing(rho, qubits, p):
    """(1 - p) rho + p (1/d on qubits) (x) Tr_qubits rho."""
    if p <= 0.0:
        return rho
    n = rho.n_qubits
    k = len(qubits)
    d = 1 << k
    rows = list(qubits)
    cols = [n + q for q in qubits]
    tensor = rho.matrix.reshape((2,) * (2 * n))
    moved = np.moveaxis(tensor, rows + cols, list(range(2 * k)))
    shape = moved.shape
    block = moved.reshape((d, d) + shape[2 * k:])
    traced = np.einsum("ii...->...", block)
    mixed = np.zeros_like(block)
    for i in range(d):
        mixed[i, i] = traced / d
    mixed = np.moveaxis(mixed.reshape(shape), list(range(2 * k)), rows + cols)
    rho.matrix = np.ascontiguousarray((1.0 - p) * rho.matrix + p * mixed.reshape(rho.matrix.shape))
    return rho


def apply_relaxation(rho, qubit, t_ns, calib):
    record = calib.qubit(qubit)
    p1, lam = relaxation_rates(t_ns, record["t1_us"], record["t2_us"])
    if p1 <= 0.0 and lam <= 0.0:
        return rho
    return apply_kraus(rho, thermal_relaxation_kraus(t_ns, record["t1_us"], record["t2_us"]), [qubit])


def _unitary(rho, gate):
    n = rho.n_qubits
    rho.matrix = _sandwich(rho.matrix, lambda m: apply_gate_array(m, n, gate))
    return rho


def apply_noisy_gate(rho, gate, calib):
    """
    Ideal gate, then depolarizing on its operands, then thermal relaxation
    of every operand over the gate time. Gates with more than two operands
    get a two-qubit channel on each (control, target) pair and last as long
    as their slowest pair.
    """
    if gate.kind == "PAULI_ROT":
        for native in decompose_pauli_rotation(gate.string, gate.angle):
            apply_noisy_gate(rho, native, calib)
        return rho
    _unitary(rho, gate)
    if gate.kind == "RZ":
        return rho
    operands = gate.operands
    if len(operands) == 1:
        apply_depolarizing(rho, operands, calib.qubit(operands[0])["err_1q"])
        duration = calib.gate_time_1q_ns
    else:
        duration = 0.0
        for control, _ in gate.controls:
            record = calib.pair(control, gate.target)
            apply_depolarizing(rho, [control, gate.target], record["err_cnot"])
            duration = max(duration, record["time_ns"])
    for qubit in operands:
        apply_relaxation(rho, qubit, duration, calib)
    return rho


def apply_noisy_program(rho, gates, calib):
    for gate in gates:
        apply_noisy_gate(rho, gate, calib)
    return rho


#############################
# Expectations and sampling

def pauli_expectation(string, rho):
    """Tr(P rho) for P on the leading qubits of rho."""
    if string.n_qubits != rho.n_qubits:
        string = string.extend(rho.n_qubits)
    perm, phase = pauli_action(string)
    rows = np.arange(1 << rho.n_qubits)
    return float(np.real(np.sum(phase * rho.matrix[perm, rows])))


def noisy_expectation(h, rho):
    if h.n_qubits > rho.n_qubits:
        raise DimensionMismatchError("%d-qubit operator on a %d-qubit density matrix" % (h.n_qubits, rho.n_qubits))
    return float(sum(c.real * pauli_expectation(s, rho) for s, c in h.items()))


class ShotSampler(object):
    """
    Finite-shot estimator: each Pauli term is measured `shots` times with a
    binomial draw around its exact expectation. shots = 0 returns exact
    values.
    """

    def __init__(self, shots=10000, rng=None):
        if shots < 0:
            raise ValueError("shots must be >= 0")
        self.shots = int(shots)
        self.rng = rng if rng is not None else np.random.default_rng(0)

    @property
    def exact(self):
        return self.shots == 0

    def sample_pauli(self, value):
        if self.exact:
            return value
        p_plus = min(1.0, max(0.0, 0.5 * (1.0 + value)))
        ones = self.rng.binomial(self.shots, p_plus)
        return 2.0 * ones / self.shots - 1.0

    def estimate(self, h, rho):
        total = 0.0
        for string, coefficient in h.items():
            value = pauli_expectation(string, rho)
            if not string.is_identity():
                value = self.sample_pauli(value)
            total += coefficient.real * value
        return total

    def __repr__(self):
        return "ShotSampler(shots=%d)" % self.shots


def noisy_ensemble_energy(h, circuit, prep, theta, calib, sampler=None, method="auto"):
    """
    Noisy L_w(theta): the purified preparation and the native-gate ansatz
    run on a density matrix; the energy is estimated by `sampler` (exact
    when None or shots = 0).
    """
    if h.n_qubits != circuit.n_working_qubits or prep.n_working != circuit.n_working_qubits:
        raise DimensionMismatchError("Hamiltonian, ansatz and references disagree on the working register")
    rho = DensityMatrix(prep.n_qubits)
    apply_noisy_program(rho, prep.gates, calib)
    apply_noisy_program(rho, native_program(circuit, theta, method), calib)
    if sampler is None or sampler.exact:
        return noisy_expectation(h, rho)
    return sampler.estimate(h, rho)


def noisy_state_energies(h, circuit, refs, theta, calib, sampler=None, method="auto"):
    """<eps_j|H|eps_j> for every reference, each evolved noisily on the working register."""
    n = circuit.n_working_qubits
    gates = native_program(circuit, theta, method)
    energies = []
    for det in refs.determinants:
        rho = DensityMatrix(n)
        flips = [x_gate(q) for q, bit in enumerate(det) if bit]
        apply_noisy_program(rho, flips, calib)
        apply_noisy_program(rho, gates, calib)
        if sampler is None or sampler.exact:
            energies.append(noisy_expectation(h, rho))
        else:
            energies.append(sampler.estimate(h, rho))
    return np.array(energies)


def totally_mixed_energy(h, sector=None):
    """
    Tr(H)/2^n over the working register, or, given sector = (N, S_z), the
    mean diagonal energy of that sector's determinants.
    """
    if sector is None:
        return float(h.constant.real)
    n_particles, sz = sector
    dets = sector_determinants(h.n_qubits, n_particles, sz)
    if not dets:
        raise CalibrationError("empty sector (N=%d, Sz=%g)" % (n_particles, sz))
    return float(np.mean([diagonal_energy(h, det) for det in dets]))


#############################
# SPSA

def spsa_optimize(objective, config, theta0, rng=None, progress=False):
    """
    Two-sided SPSA with a_k = a/(k+1+A)^alpha, c_k = c/(k+1)^gamma and
    Rademacher perturbations. The trace records (f(theta+) + f(theta-))/2
    per iteration. Whenever that mean improves, f is evaluated at the
    unperturbed theta; the returned theta is the best of those and
    final_value is f at it.
    """
    from .qpvqe_driver import SpectrumResult

    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence([int(config.seed), 0]))
    theta = np.array(theta0, dtype=float)
    best_theta = theta.copy()
    best_value = np.inf
    best_mean = np.inf
    trace = []
    iteration = 0
    for k in progress_bar(range(config.max_iterations), progress, desc="spsa"):
        iteration = k + 1
        a_k = config.spsa_a / (k + 1 + config.spsa_big_a) ** config.spsa_alpha
        c_k = config.spsa_c / (k + 1) ** config.spsa_gamma
        delta = 2.0 * rng.integers(0, 2, size=theta.shape[0]) - 1.0
        plus = objective(theta + c_k * delta)
        minus = objective(theta - c_k * delta)
        if not (np.isfinite(plus) and np.isfinite(minus)):
            raise DivergenceError("non-finite objective in SPSA", iteration)
        value = 0.5 * (plus + minus)
        trace.append(value)
        if value < best_mean:
            best_mean = value
            centre = objective(theta)
            if not np.isfinite(centre):
                raise DivergenceError("non-finite objective in SPSA", iteration)
            if centre < best_value:
                best_value = centre
                best_theta = theta.copy()
        theta = theta - a_k * (plus - minus) / (2.0 * c_k) * delta
        logger.debug("spsa iteration %d: %.9f", iteration, value)
    window = config.convergence_window
    converged = len(trace) > window and abs(trace[-1] - trace[-1 - window]) < config.convergence_threshold
    logger.info("spsa finished after %d iterations, best %.9f", iteration, best_value)
    return SpectrumResult(theta_star=best_theta, ensemble_trace=trace, iterations_used=iteration,
                          converged=converged, optimizer="spsa", seed=config.seed,
                          final_value=best_value)


def noisy_objective(h, circuit, prep, calib, sampler, method="auto"):
    """theta -> noisy ensemble energy, for spsa_optimize or driver.optimize."""
    def objective(theta):
        return noisy_ensemble_energy(h, circuit, prep, theta, calib, sampler, method)
    return objective