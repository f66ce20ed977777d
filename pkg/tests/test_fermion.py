import numpy as np
import pytest

from qpvqe.qpvqe_errors import ExcitationError, ModeRangeError
from qpvqe.qpvqe_fermion import (ExcitationGenerator, FermionTerm, SpinOrbitalMap, annihilation,
                                 creation, enumerate_sz_excitations, format_excitation_list,
                                 jordan_wigner, number_operator, parameter_count,
                                 parse_excitation_list, sz_operator)
from qpvqe.qpvqe_pauli import PauliSum, to_matrix


def commutator_norm(a, b):
    ma, mb = to_matrix(a), to_matrix(b)
    return np.max(np.abs(ma @ mb - mb @ ma))


#############################
# Jordan-Wigner

@pytest.mark.parametrize("p", range(4))
@pytest.mark.parametrize("q", range(4))
def test_canonical_anticommutation(p, q):
    a_p = jordan_wigner(annihilation(p), 4)
    a_q_dag = jordan_wigner(creation(q), 4)
    anticommutator = a_p * a_q_dag + a_q_dag * a_p
    expected = PauliSum.identity(4) if p == q else PauliSum(4)
    assert anticommutator.equals(expected)


def test_annihilators_anticommute():
    a_0 = jordan_wigner(annihilation(0), 3)
    a_2 = jordan_wigner(annihilation(2), 3)
    assert (a_0 * a_2 + a_2 * a_0).equals(PauliSum(3))


def test_number_operator_is_jw_of_occupation():
    for p in range(4):
        occupation = jordan_wigner(FermionTerm(1.0, [(p, True), (p, False)]), 4)
        assert occupation.equals(number_operator(4, [p]))


def test_list_of_terms_is_summed():
    terms = [FermionTerm(1.0, [(p, True), (p, False)]) for p in range(4)]
    assert jordan_wigner(terms, 4).equals(number_operator(4))


def test_term_outside_register():
    with pytest.raises(ModeRangeError):
        jordan_wigner(creation(4), 4)


def test_sz_operator_on_basis_states():
    sz = np.real(np.diag(to_matrix(sz_operator(2))))
    # |1000>: one alpha electron; |0100>: one beta electron
    assert sz[0b1000] == pytest.approx(0.5)
    assert sz[0b0100] == pytest.approx(-0.5)
    assert sz[0b1100] == pytest.approx(0.0)


def test_spin_orbital_map():
    orbitals = SpinOrbitalMap(3)
    assert orbitals.n_modes == 6
    assert orbitals.qubit(2, 1) == 5
    assert orbitals.spatial(5) == 2
    assert orbitals.sz(4) == 0.5
    with pytest.raises(ModeRangeError):
        orbitals.qubit(3, 0)


#############################
# Excitations

def test_single_generator_form():
    generator = ExcitationGenerator("single", (0, 2), 0, 4)
    assert len(generator.pauli_form) == 2
    assert generator.pauli_form.adjoint().equals(-generator.pauli_form)
    assert generator.sz_change() == 0.0


def test_double_generator_form():
    generator = ExcitationGenerator("double", (0, 1, 2, 3), 0, 4)
    assert len(generator.pauli_form) == 8
    assert generator.pauli_form.adjoint().equals(-generator.pauli_form)


def test_full_enumeration_h2():
    generators = enumerate_sz_excitations(2)
    singles = [g for g in generators if g.kind == "single"]
    doubles = [g for g in generators if g.kind == "double"]
    assert [g.indices for g in singles] == [(0, 2), (1, 3)]
    assert singles[0].parameter_index == singles[1].parameter_index == 0
    assert generators[:2] == singles
    assert [g.parameter_index for g in doubles] == list(range(1, len(doubles) + 1))
    assert parameter_count(generators) == 1 + len(doubles)
    assert any(g.indices == (0, 1, 2, 3) for g in doubles)


def test_unshared_singles_get_their_own_parameter():
    generators = enumerate_sz_excitations(2, include_doubles=False, share_spin=False)
    assert [g.parameter_index for g in generators] == [0, 1]


@pytest.mark.parametrize("n_spatial", [2, 3])
def test_generators_preserve_sz_and_particle_number(n_spatial):
    n_modes = 2 * n_spatial
    sz = sz_operator(n_spatial)
    number = number_operator(n_modes)
    for generator in enumerate_sz_excitations(n_spatial):
        assert generator.sz_change() == 0.0
        assert commutator_norm(generator.pauli_form, sz) < 1e-12
        assert commutator_norm(generator.pauli_form, number) < 1e-12


def test_effective_mode_keeps_order():
    generators = enumerate_sz_excitations(2, mode="effective", excitations=[(0, 1, 2, 3), (0, 3, 1, 2)])
    assert [g.indices for g in generators] == [(0, 1, 2, 3), (0, 3, 1, 2)]
    assert [g.parameter_index for g in generators] == [0, 1]


@pytest.mark.parametrize("excitations", [
    [(0, 1)],              # single across spins
    [(0, 1, 2)],           # wrong length
    [(2, 3, 0, 1)],        # pairs out of order
    [(0, 2, 1, 3)],        # changes S_z
    [],
])
def test_effective_mode_rejects(excitations):
    with pytest.raises(ExcitationError):
        enumerate_sz_excitations(2, mode="effective", excitations=excitations)


def test_enumeration_errors():
    with pytest.raises(ExcitationError):
        enumerate_sz_excitations(0)
    with pytest.raises(ExcitationError):
        enumerate_sz_excitations(2, mode="minimal")
    with pytest.raises(ModeRangeError):
        ExcitationGenerator("single", (0, 8), 0, 4)
    with pytest.raises(ExcitationError):
        ExcitationGenerator("triple", (0, 1, 2), 0, 4)


def test_excitation_list_text():
    excitations = parse_excitation_list("0-1-2-3, 0-3-1-2")
    assert excitations == [(0, 1, 2, 3), (0, 3, 1, 2)]
    assert format_excitation_list(excitations) == "0-1-2-3,0-3-1-2"
    with pytest.raises(ExcitationError):
        parse_excitation_list("0-a")
