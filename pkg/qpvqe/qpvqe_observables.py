#--------------------------------#
# qpvqe_observables.py
#--------------------------------#
"""
Energy gaps and transition amplitudes between extracted eigenstates,
measured on states that carry two (or all K) eigenstates at once.

A PairState holds (U|D_i>|0> + U|D_j>|1>)/sqrt(2) with the extra ancilla as
the last qubit:

    eps_i - eps_j          = 2 <H (x) Z>
    Re <eps_i|O|eps_j>     = <O (x) X>
    Im <eps_i|O|eps_j>     = <O (x) Y>

The full purified variants rebuild sum_j |D_j>|l_j> / sqrt(K) with equal
branches, apply U(theta*) and measure H or O against operators on the label
register.
"""

import logging

import numpy as np

from .qpvqe_ansatz import apply_ansatz
from .qpvqe_errors import DimensionMismatchError, InvalidReferenceSetError
from .qpvqe_pauli import PauliString, PauliSum, expectation, single
from .qpvqe_state_prep import (ReferenceSet, cascade_gates, ancilla_count,
                               isometry_network, label_bits, parse_bitstring)
from .qpvqe_statevector import (StateVector, apply_program, controlled_gate,
                                cnot_gate, ry_gate, x_gate)

logger = logging.getLogger(__name__)


class PairState(object):
    """Equal superposition of two evolved references tagged by one ancilla."""

    def __init__(self, state, n_working, pair=None):
        if state.n_qubits != n_working + 1:
            raise DimensionMismatchError("pair state needs %d qubits, got %d" % (n_working + 1, state.n_qubits))
        state.check_normalized()
        self.state = state
        self.n_working = n_working
        self.pair = pair

    @property
    def ancilla(self):
        return self.n_working

    @property
    def amplitudes(self):
        return self.state.amplitudes

    def __repr__(self):
        return "PairState(%d working qubits, pair=%r)" % (self.n_working, self.pair)


def _as_bits(ref):
    return parse_bitstring(ref) if isinstance(ref, str) else tuple(int(b) for b in ref)


def prepare_pair(circuit, theta_star, ref_i, ref_j):
    """
    RY(pi/2) on the ancilla, determinant flips controlled on its value, then
    U(theta*) on the working qubits.
    """
    bits_i = _as_bits(ref_i)
    bits_j = _as_bits(ref_j)
    n = circuit.n_working_qubits
    if len(bits_i) != n or len(bits_j) != n:
        raise DimensionMismatchError("references must have %d occupations" % n)
    if bits_i == bits_j:
        raise InvalidReferenceSetError("a pair state needs two distinct references")
    ancilla = n
    gates = [ry_gate(ancilla, 0.5 * np.pi)]
    for qubit in range(n):
        if bits_i[qubit] and bits_j[qubit]:
            gates.append(x_gate(qubit))
        elif bits_i[qubit]:
            gates.append(controlled_gate("X", qubit, [(ancilla, 0)]))
        elif bits_j[qubit]:
            gates.append(cnot_gate(ancilla, qubit))
    state = apply_program(StateVector(n + 1), gates)
    apply_ansatz(circuit, theta_star, state)
    return PairState(state, n, (bits_i, bits_j))


def energy_gap(pair, h):
    """eps_i - eps_j = 2 <Psi_ij| H (x) Z_a |Psi_ij>."""
    if h.n_qubits != pair.n_working:
        raise DimensionMismatchError("%d-qubit operator on %d working qubits" % (h.n_qubits, pair.n_working))
    return 2.0 * expectation(h.tensor(single(1, 0, "Z")), pair.state)


def transition_amplitude(pair, o):
    """<eps_i|O|eps_j> from <O (x) X_a> and <O (x) Y_a>."""
    if o.n_qubits != pair.n_working:
        raise DimensionMismatchError("%d-qubit operator on %d working qubits" % (o.n_qubits, pair.n_working))
    real = expectation(o.tensor(single(1, 0, "X")), pair.state)
    imag = expectation(o.tensor(single(1, 0, "Y")), pair.state)
    return complex(real, imag)


def label_projector(n_ancilla, j):
    """|l_j><l_j| on the label register as a product of (1 +- Z)/2."""
    result = PauliSum.identity(n_ancilla)
    for k, bit in enumerate(label_bits(j, n_ancilla)):
        sign = -0.5 if bit else 0.5
        result = result * PauliSum(n_ancilla, [(0.5, PauliString(n_ancilla)),
                                               (sign, PauliString(n_ancilla, [(k, "Z")]))])
    return result


def label_transition(n_ancilla, i, j):
    """|l_i><l_j| on the label register (not Hermitian for i != j)."""
    identity = PauliString(n_ancilla)
    result = PauliSum.identity(n_ancilla)
    for k, (a, b) in enumerate(zip(label_bits(i, n_ancilla), label_bits(j, n_ancilla))):
        z = PauliString(n_ancilla, [(k, "Z")])
        x = PauliString(n_ancilla, [(k, "X")])
        y = PauliString(n_ancilla, [(k, "Y")])
        if a == b:
            factor = PauliSum(n_ancilla, [(0.5, identity), (-0.5 if a else 0.5, z)])
        elif a == 0:
            factor = PauliSum(n_ancilla, [(0.5, x), (0.5j, y)])
        else:
            factor = PauliSum(n_ancilla, [(0.5, x), (-0.5j, y)])
        result = result * factor
    return result


def _refs_of(result):
    refs = result.references
    if not isinstance(refs, ReferenceSet):
        refs = ReferenceSet(refs)
    return refs


def equal_branch_state(circuit, theta_star, refs):
    """U(theta*) (x) 1 on sum_j |D_j>|l_j> / sqrt(K)."""
    if not isinstance(refs, ReferenceSet):
        refs = ReferenceSet(refs)
    if refs.K < 2:
        raise InvalidReferenceSetError("a label register needs at least two references")
    n_ancilla = ancilla_count(refs.K)
    n = circuit.n_working_qubits
    _, cascade = cascade_gates(np.full(refs.K, 1.0 / refs.K), n_ancilla, n)
    gates = list(cascade) + isometry_network(refs, n_ancilla, n)
    state = apply_program(StateVector(n + n_ancilla), gates)
    return apply_ansatz(circuit, theta_star, state)


def _check_pair(refs, pair_selector):
    i, j = pair_selector
    if not (0 <= i < refs.K and 0 <= j < refs.K):
        raise InvalidReferenceSetError("pair %r outside K = %d" % (pair_selector, refs.K))
    return int(i), int(j)


def gap_from_full_purified(result, h, pair_selector, circuit):
    """
    eps_i - eps_j = K <H (x) (P_i - P_j)> on the equal-branch state, with
    P_j the projector onto label l_j.
    """
    refs = _refs_of(result)
    i, j = _check_pair(refs, pair_selector)
    n_ancilla = ancilla_count(refs.K)
    state = equal_branch_state(circuit, result.theta_star, refs)
    difference = label_projector(n_ancilla, i) - label_projector(n_ancilla, j)
    return refs.K * expectation(h.tensor(difference), state)


def transition_from_full_purified(result, o, pair_selector, circuit):
    """
    <eps_i|O|eps_j> = K/2 (<O (x) A> + i <O (x) B>) with
    A = |l_i><l_j| + |l_j><l_i| and B = -i|l_i><l_j| + i|l_j><l_i|.
    """
    refs = _refs_of(result)
    i, j = _check_pair(refs, pair_selector)
    n_ancilla = ancilla_count(refs.K)
    state = equal_branch_state(circuit, result.theta_star, refs)
    forward = label_transition(n_ancilla, i, j)
    backward = forward.adjoint()
    a = forward + backward
    b = -1j * forward + 1j * backward
    real = expectation(o.tensor(a), state)
    imag = expectation(o.tensor(b), state)
    return 0.5 * refs.K * complex(real, imag)


def all_gaps(result, h, circuit):
    """K x K table of eps_i - eps_j from pair states (zero diagonal)."""
    refs = _refs_of(result)
    table = np.zeros((refs.K, refs.K))
    for i in range(refs.K):
        for j in range(i + 1, refs.K):
            pair = prepare_pair(circuit, result.theta_star, refs[i], refs[j])
            table[i, j] = energy_gap(pair, h)
            table[j, i] = -table[i, j]
    return table


def transition_matrix(result, o, circuit):
    """K x K table of <eps_i|O|eps_j>; the diagonal holds <eps_i|O|eps_i>."""
    refs = _refs_of(result)
    table = np.zeros((refs.K, refs.K), dtype=complex)
    for i in range(refs.K):
        if result.states is not None:
            table[i, i] = expectation(o, result.states[i])
        for j in range(i + 1, refs.K):
            pair = prepare_pair(circuit, result.theta_star, refs[i], refs[j])
            table[i, j] = transition_amplitude(pair, o)
            table[j, i] = np.conj(table[i, j])
    return table
