import numpy as np
import pytest

from qpvqe.qpvqe_errors import (InvalidReferenceSetError, InvalidWeightsError, SectorError)
from qpvqe.qpvqe_state_prep import (PurifiedPrep, ReferenceSet, WeightVector, ancilla_count,
                                    compressed_cascade, default_references, default_weights,
                                    diagonal_energy, gate_count, isometry_network,
                                    label_bits, prepare_purified, sector_determinants)
from qpvqe.qpvqe_statevector import StateVector, apply_program, basis_index

H2_REFS = ["1100", "1001", "0110", "0011"]


#############################
# weights

def test_default_weights():
    np.testing.assert_allclose(default_weights(4).w, [0.4, 0.3, 0.2, 0.1])
    assert default_weights(1).w[0] == 1.0
    assert default_weights(4).min_gap() == pytest.approx(0.1)
    assert WeightVector([1.0]).min_gap() == np.inf


@pytest.mark.parametrize("w", [
    [0.5, 0.5],          # not strictly descending
    [0.3, 0.7],          # ascending
    [0.6, 0.3],          # sums to 0.9
    [1.2, -0.2],         # negative
    [],
    [np.nan, 1.0],
])
def test_invalid_weights(w):
    with pytest.raises(InvalidWeightsError):
        WeightVector(w)


#############################
# references

def test_reference_set_properties():
    refs = ReferenceSet(H2_REFS)
    assert refs.K == 4
    assert refs.n_particles == 2
    assert refs.sz == 0.0
    assert refs.labels() == H2_REFS


@pytest.mark.parametrize("dets", [
    ["1100", "1100"],    # repeated
    ["1100", "1110"],    # particle number differs
    ["1100", "1010"],    # S_z differs
    ["1100", "110"],     # length differs
    ["1120"],
    [],
])
def test_invalid_reference_sets(dets):
    with pytest.raises(InvalidReferenceSetError):
        ReferenceSet(dets)


def test_sector_determinants_of_h2():
    assert sorted(sector_determinants(4, 2, 0.0)) == sorted(tuple(int(c) for c in d) for d in H2_REFS)
    assert len(sector_determinants(8, 2, 0.0)) == 16


def test_default_references_follow_diagonal_energy(h2):
    refs = default_references(h2, 2, 0.0, 4)
    assert refs[0] == (1, 1, 0, 0)
    assert set(refs.labels()) == set(H2_REFS)
    energies = [diagonal_energy(h2, det) for det in refs]
    assert np.all(np.diff(energies) > -1e-9)
    with pytest.raises(SectorError):
        default_references(h2, 2, 0.0, 5)


#############################
# cascade

@pytest.mark.parametrize("K, expected", [
    (2, {"RY": 1, "total": 1}),
    (4, {"RY": 1, "C1-RY": 2, "total": 3}),
    (8, {"RY": 1, "C1-RY": 2, "C2-RY": 4, "total": 7}),
])
def test_cascade_gate_count_is_linear(K, expected):
    angles, gates = compressed_cascade(default_weights(K))
    assert gate_count(gates) == expected
    assert len(angles) == K - 1
    assert set(q for g in gates for q in g.operands) == set(range(ancilla_count(K)))


@pytest.mark.parametrize("K", [2, 3, 4, 5, 8])
def test_cascade_amplitudes(K):
    weights = default_weights(K)
    n_ancilla = ancilla_count(K)
    _, gates = compressed_cascade(weights)
    state = apply_program(StateVector(n_ancilla), gates)
    expected = np.zeros(1 << n_ancilla)
    expected[:K] = np.sqrt(weights.w)
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)


def test_label_bits_msb_first():
    assert label_bits(2, 2) == (1, 0)
    assert label_bits(5, 3) == (1, 0, 1)
    assert ancilla_count(1) == 0
    assert ancilla_count(5) == 3


#############################
# purified state

def test_h2_purified_state_is_exact():
    prep = PurifiedPrep([0.4, 0.3, 0.2, 0.1], H2_REFS)
    state = prepare_purified(prep)
    assert prep.n_qubits == 6
    expected = np.zeros(64)
    for j, bits in enumerate(["110000", "100101", "011010", "001111"]):
        expected[basis_index(bits)] = np.sqrt([0.4, 0.3, 0.2, 0.1][j])
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)


def test_purified_state_is_prepared_once():
    prep = PurifiedPrep([0.4, 0.3, 0.2, 0.1], H2_REFS)
    first = prep.purified
    assert prep.purified is first
    np.testing.assert_allclose(first.amplitudes, prep.expected_amplitudes(), atol=1e-12)


def test_isometry_network_maps_every_label(rng):
    dets = sector_determinants(8, 3, 0.5)
    chosen = [dets[i] for i in rng.choice(len(dets), size=5, replace=False)]
    refs = ReferenceSet(chosen)
    gates = isometry_network(refs)
    for j in range(refs.K):
        start = basis_index((0,) * 8 + label_bits(j, 3))
        state = np.zeros(1 << 11, dtype=complex)
        state[start] = 1.0
        out = apply_program(StateVector(11, state), gates)
        assert abs(out.amplitudes[basis_index(tuple(refs[j]) + label_bits(j, 3))]) == pytest.approx(1.0)


def test_single_state_needs_no_ancilla():
    prep = PurifiedPrep([1.0], ["1100"])
    assert prep.n_ancilla == 0
    state = prepare_purified(prep)
    assert state.amplitudes[basis_index("1100")] == pytest.approx(1.0)


def test_weight_reference_count_mismatch():
    with pytest.raises(InvalidReferenceSetError):
        PurifiedPrep([0.6, 0.4], H2_REFS)
