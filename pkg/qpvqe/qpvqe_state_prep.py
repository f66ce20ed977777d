#--------------------------------#
# qpvqe_state_prep.py
#--------------------------------#
"""
Purified ensemble state sum_j sqrt(w_j) |D_j> (x) |l_j>.

Register layout: working qubits 0..N-1 carry the determinants, ancilla
qubits N..N+c-1 (c = ceil(log2 K)) carry the labels |l_j>, the binary
encoding of j with the first ancilla as most significant bit. The weights
are loaded on the ancillas by a binary RY cascade; a bit-flip network then
copies the determinants onto the working qubits.
"""

import collections
import itertools
import logging

import numpy as np

from .qpvqe_errors import (InvalidReferenceSetError, InvalidWeightsError,
                           SectorError, StatePreparationError)
from .qpvqe_statevector import (StateVector, apply_program, basis_index,
                                cnot_gate, controlled_gate, ry_gate, x_gate)

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1.0e-12
AMPLITUDE_TOL = 1.0e-12


class WeightVector(object):
    """Strictly descending positive weights summing to one."""

    def __init__(self, w):
        w = np.asarray(w, dtype=float).reshape(-1)
        if w.shape[0] < 1:
            raise InvalidWeightsError("need at least one weight")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise InvalidWeightsError("weights must be finite and positive: %s" % w)
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidWeightsError("weights sum to %.15g, not 1" % w.sum())
        if np.any(np.diff(w) >= 0.0):
            raise InvalidWeightsError("weights must be strictly descending: %s" % w)
        self.w = w
        self.w.setflags(write=False)

    @property
    def K(self):
        return self.w.shape[0]

    def min_gap(self):
        """min_{i<j} |w_i - w_j|; infinite for a single weight."""
        if self.K < 2:
            return np.inf
        return float(np.min(-np.diff(self.w)))

    def __len__(self):
        return self.K

    def __iter__(self):
        return iter(self.w)

    def __repr__(self):
        return "WeightVector(%s)" % np.array2string(self.w, precision=6)


def default_weights(K):
    """(K, K-1, ..., 1) normalised to one."""
    if K < 1:
        raise InvalidWeightsError("K must be at least 1, got %d" % K)
    raw = np.arange(K, 0, -1, dtype=float)
    return WeightVector(raw / raw.sum())


def ancilla_count(K):
    return int(np.ceil(np.log2(K))) if K > 1 else 0


def label_bits(j, n_ancilla):
    return tuple((j >> (n_ancilla - 1 - k)) & 1 for k in range(n_ancilla))


def determinant_sz(bits):
    """S_z of an interleaved occupation bitstring."""
    alpha = sum(bits[0::2])
    beta = sum(bits[1::2])
    return 0.5 * (alpha - beta)


def parse_bitstring(text):
    return tuple(int(c) for c in str(text).strip())


def format_bitstring(bits):
    return "".join(str(int(b)) for b in bits)


class ReferenceSet(object):
    """K pairwise distinct determinants with equal particle number and S_z."""

    def __init__(self, determinants):
        dets = [parse_bitstring(d) if isinstance(d, str) else tuple(int(b) for b in d)
                for d in determinants]
        if not dets:
            raise InvalidReferenceSetError("empty reference set")
        n_qubits = len(dets[0])
        for det in dets:
            if len(det) != n_qubits:
                raise InvalidReferenceSetError("determinants of unequal length")
            if any(b not in (0, 1) for b in det):
                raise InvalidReferenceSetError("occupations must be 0/1: %r" % (det,))
        if len(set(dets)) != len(dets):
            raise InvalidReferenceSetError("determinants must be pairwise distinct")
        if len(set(sum(det) for det in dets)) != 1:
            raise InvalidReferenceSetError("determinants differ in particle number")
        if len(set(determinant_sz(det) for det in dets)) != 1:
            raise InvalidReferenceSetError("determinants differ in S_z")
        self.determinants = tuple(dets)
        self.n_qubits = n_qubits

    @property
    def K(self):
        return len(self.determinants)

    @property
    def n_particles(self):
        return sum(self.determinants[0])

    @property
    def sz(self):
        return determinant_sz(self.determinants[0])

    def __len__(self):
        return self.K

    def __getitem__(self, j):
        return self.determinants[j]

    def labels(self):
        return [format_bitstring(det) for det in self.determinants]

    def __repr__(self):
        return "ReferenceSet(%s)" % ", ".join(self.labels())


def sector_determinants(n_modes, n_particles, sz):
    """All interleaved determinants with the given particle number and S_z."""
    dets = []
    for occupied in itertools.combinations(range(n_modes), n_particles):
        bits = [0] * n_modes
        for mode in occupied:
            bits[mode] = 1
        if abs(determinant_sz(bits) - sz) < 1.0e-12:
            dets.append(tuple(bits))
    return dets


def diagonal_energy(h, bits):
    """<D|H|D> from the Z-only terms of h."""
    total = 0.0
    for string, coefficient in h.items():
        letters = string.as_dict()
        if any(letter != "Z" for letter in letters.values()):
            continue
        sign = 1.0
        for qubit in letters:
            if bits[qubit]:
                sign = -sign
        total += coefficient.real * sign
    return total


def default_references(h, n_particles, sz, K):
    """
    The K determinants of the (n_particles, S_z) sector with the lowest
    diagonal energies; ties are broken by the lexicographic order of the
    occupied spin-orbital indices.
    """
    dets = sector_determinants(h.n_qubits, n_particles, sz)
    if len(dets) < K:
        raise SectorError("sector (N=%d, Sz=%g) holds %d determinants, %d requested"
                          % (n_particles, sz, len(dets), K))

    def rank(det):
        occupied = tuple(q for q, b in enumerate(det) if b)
        return (round(diagonal_energy(h, det), 9), occupied)

    chosen = sorted(dets, key=rank)[:K]
    logger.info("default references: %s", ", ".join(format_bitstring(d) for d in chosen))
    return ReferenceSet(chosen)


def cascade_gates(weights, n_ancilla, offset):
    """Binary RY cascade without validation; zero subtrees are skipped."""
    padded = np.zeros(1 << n_ancilla)
    padded[:len(weights)] = weights
    angles = []
    gates = []
    for level in range(n_ancilla):
        for prefix in range(1 << level):
            span = 1 << (n_ancilla - level)
            start = prefix * span
            left = padded[start:start + span // 2].sum()
            right = padded[start + span // 2:start + span].sum()
            if left + right <= 0.0 or right <= 0.0:
                continue
            angle = 2.0 * np.arctan2(np.sqrt(right), np.sqrt(left))
            controls = [(offset + m, bit) for m, bit in enumerate(label_bits(prefix, level))]
            if controls:
                gates.append(controlled_gate("RY", offset + level, controls, angle))
            else:
                gates.append(ry_gate(offset + level, angle))
            angles.append(angle)
    return angles, gates


def compressed_cascade(weights, offset=0):
    """
    RY / controlled-RY cascade on ceil(log2 K) qubits starting at offset
    whose output amplitude on |l_j> is sqrt(w_j). Returns (angles, gates).
    """
    if not isinstance(weights, WeightVector):
        weights = WeightVector(weights)
    return cascade_gates(weights.w, ancilla_count(weights.K), offset)


def gate_count(gates):
    """
    Gates by kind, controlled gates keyed by their control count
    ("C2-RY"), plus a "total" entry.
    """
    counts = collections.Counter()
    for gate in gates:
        if gate.kind == "CONTROLLED":
            counts["C%d-%s" % (len(gate.controls), gate.base)] += 1
        else:
            counts[gate.kind] += 1
    counts["total"] = len(gates)
    return dict(counts)


def isometry_network(refs, n_ancilla=None, ancilla_offset=None):
    """
    Gates mapping |0...0>_q |l_j>_a to |D_j>_q |l_j>_a for every j.

    Bits set in every determinant get an X. A bit whose occupation pattern
    over j equals one label bit is copied by a CNOT from that ancilla (or by
    X then CNOT for the complementary pattern). Any other pattern uses X
    gates controlled on complete labels.
    """
    K = refs.K
    if n_ancilla is None:
        n_ancilla = ancilla_count(K)
    if K > (1 << n_ancilla):
        raise InvalidReferenceSetError("%d references do not fit %d ancilla qubits" % (K, n_ancilla))
    if ancilla_offset is None:
        ancilla_offset = refs.n_qubits
    labels = [label_bits(j, n_ancilla) for j in range(K)]
    gates = []
    for qubit in range(refs.n_qubits):
        occupied = set(j for j in range(K) if refs[j][qubit])
        if not occupied:
            continue
        if len(occupied) == K:
            gates.append(x_gate(qubit))
            continue
        copied = False
        for k in range(n_ancilla):
            ones = set(j for j in range(K) if labels[j][k] == 1)
            zeros = set(range(K)) - ones
            if occupied == ones:
                gates.append(cnot_gate(ancilla_offset + k, qubit))
            elif occupied == zeros:
                gates.append(x_gate(qubit))
                gates.append(cnot_gate(ancilla_offset + k, qubit))
            else:
                continue
            copied = True
            break
        if copied:
            continue
        empty = set(range(K)) - occupied
        if len(occupied) <= 1 + len(empty):
            flips = sorted(occupied)
        else:
            gates.append(x_gate(qubit))
            flips = sorted(empty)
        for j in flips:
            controls = [(ancilla_offset + k, bit) for k, bit in enumerate(labels[j])]
            gates.append(controlled_gate("X", qubit, controls))
    return gates


class PurifiedPrep(object):
    """Weights, references and the gate program producing |Phi(w)>."""

    def __init__(self, weights, refs):
        if not isinstance(weights, WeightVector):
            weights = WeightVector(weights)
        if not isinstance(refs, ReferenceSet):
            refs = ReferenceSet(refs)
        if weights.K != refs.K:
            raise InvalidReferenceSetError("%d weights for %d references" % (weights.K, refs.K))
        self.weights = weights
        self.refs = refs
        self.n_working = refs.n_qubits
        self.n_ancilla = ancilla_count(weights.K)
        self.angles, cascade = compressed_cascade(weights, offset=self.n_working)
        self.gates = list(cascade) + isometry_network(refs, self.n_ancilla, self.n_working)
        self._purified = None

    @property
    def K(self):
        return self.weights.K

    @property
    def n_qubits(self):
        return self.n_working + self.n_ancilla

    @property
    def purified(self):
        """|Phi(w)>, prepared and checked on first access."""
        if self._purified is None:
            self._purified = prepare_purified(self)
        return self._purified

    def mapped_indices(self):
        return [basis_index(tuple(self.refs[j]) + label_bits(j, self.n_ancilla))
                for j in range(self.K)]

    def expected_amplitudes(self):
        target = np.zeros(1 << self.n_qubits, dtype=complex)
        for j, index in enumerate(self.mapped_indices()):
            target[index] = np.sqrt(self.weights.w[j])
        return target

    def __repr__(self):
        return "PurifiedPrep(K=%d, %d working + %d ancilla qubits, %d gates)" % (
            self.K, self.n_working, self.n_ancilla, len(self.gates))


def prepare_purified(weights, refs=None):
    """
    Run the cascade and the network on |0...0> and check the result against
    sum_j sqrt(w_j) |D_j>|l_j>. Accepts a PurifiedPrep or (weights, refs).
    """
    prep = weights if isinstance(weights, PurifiedPrep) else PurifiedPrep(weights, refs)
    state = apply_program(StateVector(prep.n_qubits), prep.gates)
    deviation = np.max(np.abs(state.amplitudes - prep.expected_amplitudes()))
    if deviation > AMPLITUDE_TOL:
        raise StatePreparationError("purified state off by %.3e" % deviation)
    return state
