#--------------------------------#
# qpvqe_statevector.py
#--------------------------------#
"""
Dense pure-state simulator.

Amplitude arrays have length 2^n, qubit 0 being the most significant bit of
the index. Gate kernels act on the leading axis of an array and accept any
trailing batch axes, which is how the density matrix code reuses them.
"""

import logging

import numpy as np

from .qpvqe_errors import DimensionMismatchError, NormalizationError, QubitRangeError
from .qpvqe_pauli import PauliString, apply_string

logger = logging.getLogger(__name__)

NORM_TOL = 1.0e-9

_X = np.array([[0, 1], [1, 0]], dtype=complex)


def rx_matrix(angle):
    c, s = np.cos(0.5 * angle), np.sin(0.5 * angle)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(angle):
    c, s = np.cos(0.5 * angle), np.sin(0.5 * angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(angle):
    return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)


ROTATIONS = {"RX": rx_matrix, "RY": ry_matrix, "RZ": rz_matrix}
GATE_KINDS = ("X", "RX", "RY", "RZ", "CNOT", "CONTROLLED", "PAULI_ROT")


class GateOp(object):
    """
    One gate of a program.

    kind is one of X, RX, RY, RZ, CNOT, CONTROLLED or PAULI_ROT. Single-qubit
    kinds use `target`; CNOT uses `controls=[(c, 1)]` and `target`;
    CONTROLLED wraps a base kind (X or RY) on `target` with `controls`, a
    list of (qubit, value) pairs; PAULI_ROT carries a PauliString and
    applies exp(-i angle/2 P).
    """

    __slots__ = ("kind", "target", "controls", "angle", "base", "string")

    def __init__(self, kind, target=None, controls=(), angle=None, base=None, string=None):
        if kind not in GATE_KINDS:
            raise ValueError("unknown gate kind '%s'" % kind)
        self.kind = kind
        self.target = target
        self.controls = tuple((int(q), int(v)) for q, v in controls)
        self.angle = angle
        self.base = base
        self.string = string
        if kind == "CONTROLLED" and base not in ("X", "RY"):
            raise ValueError("controlled gates wrap X or RY, got '%s'" % base)
        if kind == "PAULI_ROT" and not isinstance(string, PauliString):
            raise ValueError("PAULI_ROT needs a PauliString")
        if kind == "CNOT" and (len(self.controls) != 1 or self.controls[0][1] != 1):
            raise ValueError("CNOT takes exactly one control on value 1")

    @property
    def operands(self):
        if self.kind == "PAULI_ROT":
            return self.string.support
        return tuple(q for q, _ in self.controls) + (self.target,)

    @property
    def is_parameterized(self):
        return self.kind in ("RX", "RY", "RZ", "PAULI_ROT") or \
            (self.kind == "CONTROLLED" and self.base == "RY")

    def inverse(self):
        angle = None if self.angle is None else -self.angle
        if not self.is_parameterized:
            angle = self.angle
        return GateOp(self.kind, self.target, self.controls, angle, self.base, self.string)

    def matrix(self, angle=None):
        """2x2 matrix acting on the target (not defined for PAULI_ROT)."""
        if angle is None:
            angle = self.angle
        kind = self.base if self.kind == "CONTROLLED" else self.kind
        if kind in ("X", "CNOT"):
            return _X
        return ROTATIONS[kind](angle)

    def __repr__(self):
        if self.kind == "PAULI_ROT":
            return "GateOp(PAULI_ROT, %s, angle=%r)" % (self.string.label(), self.angle)
        return "GateOp(%s, target=%r, controls=%r, angle=%r, base=%r)" % (
            self.kind, self.target, self.controls, self.angle, self.base)


def x_gate(qubit):
    return GateOp("X", target=qubit)


def rotation_gate(kind, qubit, angle):
    return GateOp(kind, target=qubit, angle=angle)


def ry_gate(qubit, angle):
    return GateOp("RY", target=qubit, angle=angle)


def cnot_gate(control, target):
    return GateOp("CNOT", target=target, controls=[(control, 1)])


def controlled_gate(base, target, controls, angle=None):
    return GateOp("CONTROLLED", target=target, controls=controls, angle=angle, base=base)


def pauli_rot_gate(string, angle=None):
    return GateOp("PAULI_ROT", string=string, angle=angle)


class StateVector(object):

    def __init__(self, n_qubits, amplitudes=None):
        self.n_qubits = int(n_qubits)
        dim = 1 << self.n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(dim, dtype=complex)
            amplitudes[0] = 1.0
        amplitudes = np.ascontiguousarray(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != dim:
            raise DimensionMismatchError("%d amplitudes for %d qubits" % (amplitudes.shape[0], self.n_qubits))
        self.amplitudes = amplitudes

    def copy(self):
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self):
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def check_normalized(self, tol=NORM_TOL):
        if abs(self.norm() ** 2 - 1.0) > tol:
            raise NormalizationError("state norm %.12g deviates from 1" % self.norm())

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return "StateVector(%d qubits)" % self.n_qubits


def basis_index(bits):
    """Index of a bitstring ('1100' or a 0/1 sequence), MSB first."""
    index = 0
    for bit in bits:
        bit = int(bit)
        if bit not in (0, 1):
            raise ValueError("occupations must be 0 or 1, got %r" % bit)
        index = (index << 1) | bit
    return index


def index_bits(index, n_qubits):
    return tuple((index >> (n_qubits - 1 - q)) & 1 for q in range(n_qubits))


def init_basis(n_qubits, bitstring):
    bits = [int(b) for b in bitstring]
    if len(bits) != n_qubits:
        raise DimensionMismatchError("bitstring of length %d for %d qubits" % (len(bits), n_qubits))
    amplitudes = np.zeros(1 << n_qubits, dtype=complex)
    amplitudes[basis_index(bits)] = 1.0
    return StateVector(n_qubits, amplitudes)


def random_state(n_qubits, rng):
    amplitudes = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    amplitudes /= np.linalg.norm(amplitudes)
    return StateVector(n_qubits, amplitudes)


def _check_operands(gate, n_qubits):
    operands = gate.operands
    for qubit in operands:
        if qubit is None or qubit < 0 or qubit >= n_qubits:
            raise QubitRangeError("gate operand %r outside a %d-qubit register" % (qubit, n_qubits))
    if len(set(operands)) != len(operands):
        raise QubitRangeError("gate operands %r are not distinct" % (operands,))


def _apply_single(array, n_qubits, target, matrix, controls=()):
    """In-place 2x2 matrix on target, restricted to the control pattern."""
    tensor = array.reshape((2,) * n_qubits + array.shape[1:])
    index = [slice(None)] * tensor.ndim
    for qubit, value in controls:
        index[qubit] = value
    sub = tensor[tuple(index)]
    axis = target - sum(1 for qubit, _ in controls if qubit < target)
    view = np.moveaxis(sub, axis, 0)
    low = view[0].copy()
    high = view[1].copy()
    view[0] = matrix[0, 0] * low + matrix[0, 1] * high
    view[1] = matrix[1, 0] * low + matrix[1, 1] * high


def apply_matrix_array(array, n_qubits, matrix, qubits):
    """
    A 2^k x 2^k matrix on the listed qubits (first listed = most
    significant) of an array of shape (2^n,) + batch. Returns a new array.
    """
    k = len(qubits)
    tensor = array.reshape((2,) * n_qubits + array.shape[1:])
    operator = np.asarray(matrix).reshape((2,) * (2 * k))
    moved = np.tensordot(operator, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    moved = np.moveaxis(moved, list(range(k)), list(qubits))
    return np.ascontiguousarray(moved).reshape(array.shape)


def apply_pauli_exponential_array(array, string, angle):
    """cos(angle/2) psi - i sin(angle/2) P psi on the leading axis of array."""
    if string.is_identity():
        array *= np.exp(-0.5j * angle)
        return array
    dim = 1 << string.n_qubits
    block = array.reshape((dim, -1) + array.shape[1:])
    rotated = np.cos(0.5 * angle) * block - 1j * np.sin(0.5 * angle) * apply_string(string, block)
    block[...] = rotated
    return array


def apply_gate_array(array, n_qubits, gate, angle=None):
    """
    Apply gate to an array of shape (2^n,) + batch. Contiguous arrays are
    updated in place; the (possibly new) array is returned.
    """
    _check_operands(gate, n_qubits)
    array = np.ascontiguousarray(array)
    if angle is None:
        angle = gate.angle
    if gate.is_parameterized and (angle is None or not np.isfinite(angle)):
        raise ValueError("gate %r needs a finite angle" % gate)
    if gate.kind == "PAULI_ROT":
        return apply_pauli_exponential_array(array, gate.string, angle)
    _apply_single(array, n_qubits, gate.target, gate.matrix(angle), gate.controls)
    return array


def apply_gate(state, gate, angle=None):
    """Unitary action of gate on state, in place; returns the state."""
    state.amplitudes = apply_gate_array(state.amplitudes, state.n_qubits, gate, angle)
    return state


def apply_program(state, gates):
    for gate in gates:
        state.amplitudes = apply_gate_array(state.amplitudes, state.n_qubits, gate)
    return state


def apply_pauli_exponential(state, string, angle):
    """exp(-i angle/2 P) on state, P acting on the leading qubits."""
    if string.n_qubits > state.n_qubits:
        raise QubitRangeError("%d-qubit string on a %d-qubit state" % (string.n_qubits, state.n_qubits))
    apply_pauli_exponential_array(state.amplitudes, string, angle)
    return state


def inner_product(a, b):
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError("inner product of %d- and %d-qubit states" % (a.n_qubits, b.n_qubits))
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a, b):
    value = abs(inner_product(a, b)) ** 2
    return float(min(1.0, value))


def reduced_density(state, keep):
    """Partial trace onto the qubits in keep (kept in ascending order)."""
    keep = sorted(keep)
    n = state.n_qubits
    traced = [q for q in range(n) if q not in keep]
    tensor = state.amplitudes.reshape((2,) * n)
    tensor = np.transpose(tensor, keep + traced).reshape(1 << len(keep), -1)
    return tensor @ tensor.conj().T


def measure_conditional(state, qubit, value):
    """
    Project qubit onto |value> and drop it. Returns (probability, state on
    the remaining n-1 qubits, renormalised).
    """
    n = state.n_qubits
    if qubit < 0 or qubit >= n:
        raise QubitRangeError("qubit %d outside a %d-qubit register" % (qubit, n))
    tensor = state.amplitudes.reshape((2,) * n)
    branch = np.take(tensor, value, axis=qubit).reshape(-1)
    probability = float(np.vdot(branch, branch).real)
    if probability == 0.0:
        return 0.0, None
    return probability, StateVector(n - 1, branch / np.sqrt(probability))


def decompose_pauli_rotation(string, angle):
    """
    exp(-i angle/2 P) as native gates: a basis change to Z on every support
    qubit, a CNOT ladder, RZ on the last support qubit and the mirror image.
    The identity string only contributes a global phase and yields no gates.
    """
    if string.is_identity():
        return []
    basis = []
    for qubit, letter in string.letters:
        if letter == "X":
            basis.append(rotation_gate("RY", qubit, -0.5 * np.pi))
        elif letter == "Y":
            basis.append(rotation_gate("RX", qubit, 0.5 * np.pi))
    support = string.support
    ladder = [cnot_gate(support[k], support[k + 1]) for k in range(len(support) - 1)]
    gates = list(basis) + ladder + [rotation_gate("RZ", support[-1], angle)]
    gates += [g.inverse() for g in reversed(ladder)]
    gates += [g.inverse() for g in reversed(basis)]
    return gates


def subspace_overlap(vectors, state):
    """sum_k |<v_k|psi>|^2 over the columns of vectors, capped at 1."""
    vectors = np.asarray(vectors).reshape(state.amplitudes.shape[0], -1)
    overlaps = vectors.conj().T @ state.amplitudes
    return float(min(1.0, np.sum(np.abs(overlaps) ** 2)))
