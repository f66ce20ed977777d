#--------------------------------#
# qpvqe_ansatz.py
#--------------------------------#
"""
Single Trotter step UCCGSD circuit U(theta) compiled from excitation
generators, its gradients, and its native-gate form for noisy simulation.

A generator with Pauli form sum_k (i b_k) P_k contributes the rotations
exp(-i theta c_k P_k) with c_k = -b_k, applied as Pauli exponentials of
angle 2 theta c_k / trotter_steps.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .qpvqe_errors import DimensionMismatchError, ExcitationError, QubitRangeError
from .qpvqe_pauli import apply_string
from .qpvqe_statevector import (apply_pauli_exponential_array, cnot_gate,
                                decompose_pauli_rotation, ry_gate)

logger = logging.getLogger(__name__)


class Rotation(object):
    __slots__ = ("string", "coefficient", "parameter_index", "group")

    def __init__(self, string, coefficient, parameter_index, group):
        self.string = string
        self.coefficient = float(coefficient)
        self.parameter_index = int(parameter_index)
        self.group = int(group)

    def __repr__(self):
        return "Rotation(%s, %+.6g, theta[%d])" % (self.string.label(), self.coefficient, self.parameter_index)


class AnsatzCircuit(object):
    """
    Ordered Pauli rotations on the working qubits. Immutable once built;
    `trotter_steps` repeats the whole sequence with angles divided by the
    step count.
    """

    def __init__(self, n_working_qubits, rotations, parameter_count, trotter_steps=1, generators=None):
        self.n_working_qubits = int(n_working_qubits)
        self.rotations = tuple(rotations)
        self.parameter_count = int(parameter_count)
        self.trotter_steps = int(trotter_steps)
        self.generators = tuple(generators or ())
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be at least 1")
        for rotation in self.rotations:
            if rotation.parameter_index >= self.parameter_count:
                raise ValueError("rotation %r refers past %d parameters" % (rotation, self.parameter_count))

    def __len__(self):
        return len(self.rotations) * self.trotter_steps

    def schedule(self):
        """Flat list of rotations including Trotter repetitions."""
        return list(self.rotations) * self.trotter_steps

    def angles(self, theta):
        theta = self.check_theta(theta)
        scale = 2.0 / self.trotter_steps
        return [scale * theta[r.parameter_index] * r.coefficient for r in self.schedule()]

    def check_theta(self, theta):
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.shape[0] != self.parameter_count:
            raise DimensionMismatchError("%d parameters for a circuit with %d" % (theta.shape[0], self.parameter_count))
        if not np.all(np.isfinite(theta)):
            raise ValueError("parameter vector has non-finite entries")
        return theta

    def __repr__(self):
        return "AnsatzCircuit(%d qubits, %d rotations, %d parameters)" % (
            self.n_working_qubits, len(self.rotations), self.parameter_count)


def build_uccgsd(generators, n_working_qubits=None, trotter_steps=1):
    if not generators:
        raise ExcitationError("cannot build an ansatz from no generators")
    n_modes = generators[0].n_modes
    if n_working_qubits is None:
        n_working_qubits = n_modes
    rotations = []
    for group, generator in enumerate(generators):
        if generator.n_modes > n_working_qubits:
            raise QubitRangeError("generator %r reaches past the %d working qubits" % (generator, n_working_qubits))
        for string, coefficient in generator.pauli_form.items():
            if abs(coefficient.real) > 1.0e-12:
                raise ExcitationError("generator %r is not anti-Hermitian" % generator)
            if string.n_qubits != n_working_qubits:
                string = string.extend(n_working_qubits)
            rotations.append(Rotation(string, -coefficient.imag, generator.parameter_index, group))
    count = 1 + max(g.parameter_index for g in generators)
    circuit = AnsatzCircuit(n_working_qubits, rotations, count, trotter_steps, generators)
    logger.debug("built %r", circuit)
    return circuit


def _check_state(circuit, state):
    if state.n_qubits < circuit.n_working_qubits:
        raise DimensionMismatchError("%d-qubit state for a %d-qubit ansatz" % (state.n_qubits, circuit.n_working_qubits))


def apply_ansatz(circuit, theta, state):
    """U(theta) (x) 1 on state, in place."""
    _check_state(circuit, state)
    for rotation, angle in zip(circuit.schedule(), circuit.angles(theta)):
        apply_pauli_exponential_array(state.amplitudes, rotation.string, angle)
    return state


def apply_ansatz_inverse(circuit, theta, state):
    _check_state(circuit, state)
    schedule = circuit.schedule()
    angles = circuit.angles(theta)
    for rotation, angle in zip(reversed(schedule), reversed(angles)):
        apply_pauli_exponential_array(state.amplitudes, rotation.string, -angle)
    return state


def apply_to_array(circuit, theta, array):
    """U(theta) on the leading axis of an array with batch axes."""
    array = np.ascontiguousarray(array, dtype=complex)
    for rotation, angle in zip(circuit.schedule(), circuit.angles(theta)):
        apply_pauli_exponential_array(array, rotation.string, angle)
    return array


def circuit_unitary(circuit, theta):
    """Dense U(theta) on the working register."""
    dim = 1 << circuit.n_working_qubits
    return apply_to_array(circuit, theta, np.eye(dim, dtype=complex))


def _shifted_value(angles, schedule, state, objective, position, shift):
    work = state.copy()
    for k, (rotation, angle) in enumerate(zip(schedule, angles)):
        if k == position:
            angle = angle + shift
        apply_pauli_exponential_array(work.amplitudes, rotation.string, angle)
    return objective(work)


def gradient(circuit, theta, objective, state, jobs=1):
    """
    Parameter-shift gradient of objective(U(theta)|state>).

    Each rotation exp(-i phi/2 P) is shifted by +-pi/2; the chain factor
    d phi / d theta = 2 c / trotter_steps is applied and rotations sharing a
    parameter are summed. With jobs > 1 the shifted evaluations run on a
    thread pool, each on its own copy of state, and are combined in the
    sequential order.
    """
    theta = circuit.check_theta(theta)
    _check_state(circuit, state)
    schedule = circuit.schedule()
    angles = circuit.angles(theta)

    def entry(position):
        plus = _shifted_value(angles, schedule, state, objective, position, 0.5 * np.pi)
        minus = _shifted_value(angles, schedule, state, objective, position, -0.5 * np.pi)
        return 0.5 * (plus - minus)

    positions = range(len(schedule))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            derivatives = list(pool.map(entry, positions))
    else:
        derivatives = [entry(position) for position in positions]
    grad = np.zeros(circuit.parameter_count)
    scale = 2.0 / circuit.trotter_steps
    for rotation, derivative in zip(schedule, derivatives):
        grad[rotation.parameter_index] += scale * rotation.coefficient * derivative
    return grad


def ensemble_gradient(circuit, theta, h, state):
    """
    Value and analytic gradient of <state| U^dagger (H (x) 1) U |state> from
    one forward and one backward sweep. Agrees with the parameter-shift rule;
    cost does not grow with the number of parameters.
    """
    theta = circuit.check_theta(theta)
    _check_state(circuit, state)
    schedule = circuit.schedule()
    angles = circuit.angles(theta)
    psi = state.amplitudes.copy()
    for rotation, angle in zip(schedule, angles):
        apply_pauli_exponential_array(psi, rotation.string, angle)
    lam = h.apply(psi)
    value = float(np.vdot(psi, lam).real)
    grad = np.zeros(circuit.parameter_count)
    scale = 2.0 / circuit.trotter_steps
    dim = 1 << circuit.n_working_qubits
    for rotation, angle in zip(reversed(schedule), reversed(angles)):
        rotated = apply_string(rotation.string, psi.reshape(dim, -1)).reshape(-1)
        derivative = float(np.vdot(lam, rotated).imag)
        grad[rotation.parameter_index] += scale * rotation.coefficient * derivative
        apply_pauli_exponential_array(psi, rotation.string, -angle)
        apply_pauli_exponential_array(lam, rotation.string, -angle)
    return value, grad


def _gadget_plan(rotations):
    """
    Pivot, fan-out targets and controls when the rotations of one generator
    share an X/Y pattern with an odd number of Y letters each; None
    otherwise.
    """
    masks = [r.string.masks() for r in rotations]
    x_masks = set(m[0] for m in masks)
    if len(x_masks) != 1 or any(m[2] % 2 == 0 for m in masks):
        return None
    letters = rotations[0].string.as_dict()
    x_part = sorted(q for q, letter in letters.items() if letter in ("X", "Y"))
    support = sorted(set(q for r in rotations for q in r.string.support))
    pivot = x_part[0]
    fan_out = x_part[1:]
    controls = [q for q in support if q != pivot]
    return pivot, fan_out, controls


def _gadget_cost(plan):
    pivot, fan_out, controls = plan
    return 2 * len(fan_out) + (1 << len(controls) if controls else 0)


def _ladder_cost(rotations):
    return sum(2 * (r.string.weight - 1) for r in rotations)


def _gray(i):
    return i ^ (i >> 1)


def _gadget_gates(rotations, angles, plan):
    """
    Commuting rotations exp(-i sum_k a_k/2 P_k) as CNOT fan-out onto the
    pivot, a uniformly controlled RY on the pivot, and the fan-out again.
    After the fan-out every P_k reads sign_k * Y_pivot Z_T(k).
    """
    pivot, fan_out, controls = plan
    fan_set = set(fan_out)
    n_controls = len(controls)
    position = dict((q, m) for m, q in enumerate(controls))
    patterns = np.arange(1 << n_controls)
    target_angles = np.zeros(1 << n_controls)
    for rotation, angle in zip(rotations, angles):
        letters = rotation.string.as_dict()
        z_set = set(q for q, letter in letters.items() if letter in ("Y", "Z"))
        n_y = sum(1 for letter in letters.values() if letter == "Y")
        hits = len(z_set & fan_set)
        mapped = set(z_set)
        if hits % 2 == 1:
            mapped ^= set([pivot])
        mapped.discard(pivot)
        sign = -1.0 if ((n_y - 1) // 2) % 2 else 1.0
        t_mask = 0
        for q in mapped:
            t_mask |= 1 << position[q]
        parity = np.array([bin(b & t_mask).count("1") % 2 for b in patterns])
        target_angles += sign * angle * (1 - 2 * parity)
    gates = [cnot_gate(pivot, q) for q in fan_out]
    if n_controls == 0:
        gates.append(ry_gate(pivot, target_angles[0]))
    else:
        size = 1 << n_controls
        for i in range(size):
            walsh = np.array([1 - 2 * (bin(b & _gray(i)).count("1") % 2) for b in patterns])
            alpha = float(np.dot(walsh, target_angles)) / size
            gates.append(ry_gate(pivot, alpha))
            flip = _gray(i) ^ _gray((i + 1) % size)
            gates.append(cnot_gate(controls[flip.bit_length() - 1], pivot))
    gates += [cnot_gate(pivot, q) for q in reversed(fan_out)]
    return gates


def native_program(circuit, theta, method="auto"):
    """
    U(theta) as X/RX/RY/RZ/CNOT gates. method 'ladder' decomposes every
    rotation separately; 'gadget' synthesises each generator's rotations
    together where possible; 'auto' picks the form with fewer CNOTs per
    generator.
    """
    if method not in ("auto", "ladder", "gadget"):
        raise ValueError("unknown compilation method '%s'" % method)
    rotations = circuit.rotations
    angles = circuit.angles(theta)
    gates = []
    for step in range(circuit.trotter_steps):
        offset = step * len(rotations)
        k = 0
        while k < len(rotations):
            end = k
            while end + 1 < len(rotations) and rotations[end + 1].group == rotations[k].group:
                end += 1
            block = rotations[k:end + 1]
            block_angles = angles[offset + k:offset + end + 1]
            plan = None if method == "ladder" else _gadget_plan(block)
            if plan is not None and (method == "gadget" or _gadget_cost(plan) < _ladder_cost(block)):
                gates.extend(_gadget_gates(block, block_angles, plan))
            else:
                for rotation, angle in zip(block, block_angles):
                    gates.extend(decompose_pauli_rotation(rotation.string, angle))
            k = end + 1
    return gates
