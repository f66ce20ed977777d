import csv
import io
import os

import numpy as np
import pytest

from conftest import CHEMICAL_ACCURACY, DATA_DIR, H2_FILE, fixture_path
from qpvqe.qpvqe_driver import SpectrumResult, fidelities_against, run_qpvqe
from qpvqe.qpvqe_errors import (HamiltonianParseError, ManifestError, ResourceGuardError,
                                ResultFormatError, SectorError)
from qpvqe.qpvqe_fermion import number_operator, sz_operator
from qpvqe.qpvqe_harness import (CSV_COLUMNS, SweepManifest, ed_sector, exact_diagonalize,
                                 format_hamiltonian, format_result, load_hamiltonian,
                                 parse_hamiltonian, parse_result, read_manifest, read_result,
                                 result_rows, run_sweep, sector_basis, write_result,
                                 write_sweep_csv)
from qpvqe.qpvqe_parameter_files import QpvqeConfig
from qpvqe.qpvqe_pauli import PauliString, PauliSum, expectation, to_matrix
from qpvqe.qpvqe_statevector import StateVector


#############################
# Hamiltonian files

def test_duplicate_words_are_collected():
    h = parse_hamiltonian("qubits 2\n0.5 Z0\n0.5 Z0\n")
    assert h.equals(PauliSum.from_labels(2, [(1.0, "Z0")]))


def test_identity_line_is_a_constant():
    h = parse_hamiltonian("qubits 1\n-0.25 I\n")
    assert h.constant == -0.25
    assert len(h) == 1


def test_comments_and_blank_lines():
    text = "# header comment\n\nqubits 3   # three qubits\n0.1 X0 Z2  # a term\n\n-0.2 Y1\n"
    h = parse_hamiltonian(text)
    assert h.coefficient(PauliString.from_label(3, "X0 Z2")) == 0.1
    assert h.coefficient(PauliString.from_label(3, "Y1")) == -0.2


@pytest.mark.parametrize("text, line", [
    ("qubits 2\n0.3 X0 W1\n", 2),      # unknown letter
    ("qubits 2\n0.3 X0 Z2\n", 2),      # index past the register
    ("qubits 2\n0.1 Z0\n1+2j X1\n", 3),
    ("qubits 2\n0.3\n", 2),
    ("0.3 X0\n", 1),                   # no header
    ("qubits two\n", 1),
    ("qubits 2\n0.3 X0 X0\n", 2),      # qubit repeated
    ("qubits 2\n0.3 Xa\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(HamiltonianParseError) as info:
        parse_hamiltonian(text)
    assert info.value.line_number == line
    assert "line %d" % line in str(info.value)


def test_empty_text():
    with pytest.raises(HamiltonianParseError):
        parse_hamiltonian("# nothing here\n")


def test_format_and_reparse_h2(h2):
    again = parse_hamiltonian(format_hamiltonian(h2))
    assert again == h2
    assert format_hamiltonian(again) == format_hamiltonian(h2)


def test_h2_file_contents(h2):
    assert h2.n_qubits == 4
    assert len(h2) == 15
    assert h2.is_hermitian()


#############################
# exact diagonalization

def test_single_z():
    ed = exact_diagonalize(PauliSum.from_labels(1, [(1.0, "Z0")]))
    np.testing.assert_allclose(ed.energies, [-1.0, 1.0])


def test_hopping_pair():
    h = PauliSum.from_labels(2, [(1.0, "X0 X1"), (1.0, "Y0 Y1")])
    ed = exact_diagonalize(h)
    np.testing.assert_allclose(ed.energies, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_h2_reference(h2, h2_ed):
    assert h2_ed.K == 4
    assert h2_ed.sector == (2, 0.0)
    assert np.all(np.diff(h2_ed.energies) >= 0)
    assert h2_ed.energies[0] == pytest.approx(-1.13619, abs=1e-4)
    matrix = to_matrix(h2)
    for j in range(4):
        v = h2_ed.vectors[:, j]
        assert np.linalg.norm(matrix @ v - h2_ed.energies[j] * v) <= 1e-10
    np.testing.assert_allclose(h2_ed.vectors.conj().T @ h2_ed.vectors, np.eye(4), atol=1e-12)


def test_eigenvectors_lie_in_sector(h2_ed):
    number = number_operator(4)
    sz = sz_operator(2)
    for j in range(h2_ed.K):
        state = h2_ed.state(j)
        assert expectation(number, state) == pytest.approx(2.0, abs=1e-10)
        assert expectation(sz, state) == pytest.approx(0.0, abs=1e-10)


def test_sector_basis_and_errors(h2):
    assert sector_basis(4, 2, 0.0) == [3, 6, 9, 12]
    with pytest.raises(SectorError):
        exact_diagonalize(h2, (2, 0.0), 5)
    with pytest.raises(SectorError):
        exact_diagonalize(h2, (5, 0.0), 1)
    with pytest.raises(ResourceGuardError):
        exact_diagonalize(PauliSum.identity(15))


def test_ed_sector_defaults(h2):
    assert ed_sector(h2, QpvqeConfig()) == (2, 0.0)
    assert ed_sector(h2, QpvqeConfig(n_particles=3)) == (3, 0.5)


def test_degenerate_levels_compare_as_subspace():
    # two degenerate levels; any state inside their span has fidelity one
    h = PauliSum.from_labels(2, [(1.0, "Z0"), (1.0, "Z1")])
    ed = exact_diagonalize(h)
    inside = StateVector(2, np.array([0, 0.6, 0.8, 0]))
    fidelities = fidelities_against(ed, [StateVector(2, np.array([0, 0, 0, 1.0])), inside])
    np.testing.assert_allclose(fidelities, [1.0, 1.0])


#############################
# manifests

def test_read_manifest(tmp_path):
    path = tmp_path / "curve.sweep"
    path.write_text("# two points\nconfig run.param\npoint 0.70 a.ham\npoint 0.80 sub/b.ham\n")
    manifest = read_manifest(str(path))
    assert len(manifest) == 2
    assert manifest.points[1] == ("0.80", os.path.join(str(tmp_path), "sub", "b.ham"))
    assert manifest.config_path == os.path.join(str(tmp_path), "run.param")


@pytest.mark.parametrize("text", [
    "",
    "point 0.70 a.ham\npoint 0.70 b.ham\n",
    "point 0.70\n",
    "grid 0.5 3.0\n",
])
def test_bad_manifests(tmp_path, text):
    path = tmp_path / "bad.sweep"
    path.write_text(text)
    with pytest.raises(ManifestError):
        read_manifest(str(path))


def test_manifest_without_config_uses_defaults():
    assert SweepManifest([("a", "a.ham")]).config().n_states == 4


def test_shipped_manifest_points():
    manifest = read_manifest(os.path.join(DATA_DIR, "h2_sweep.sweep"))
    assert len(manifest) == 26
    assert [label for label, _ in manifest.points][:3] == ["0.50", "0.60", "0.70"]


#############################
# result records

def small_result():
    state = StateVector(1, np.array([0.6, 0.8j]))
    return SpectrumResult(theta_star=[0.1, -0.2], energies=np.array([-1.0]), states=[state],
                          ensemble_trace=[-0.5, -1.0], e_w=0.0, bound=0.0, iterations_used=1,
                          converged=True, ordered=True, weights=np.array([1.0]), references=["1"],
                          ed_energies=np.array([-1.0]), optimizer="adam", seed=4)


def test_result_record_layout():
    text = format_result(small_result())
    lines = text.splitlines()
    assert lines[0] == "format: 1"
    keys = [line.split("\t")[0] for line in lines[1:]]
    assert keys[:3] == ["K", "optimizer", "seed"]
    assert "state_0_im" in keys
    assert "final_value\t-1" in lines


def test_result_record_reads_back(tmp_path):
    path = str(tmp_path / "run.txt")
    write_result(small_result(), path)
    again = read_result(path)
    np.testing.assert_array_equal(again.theta_star, [0.1, -0.2])
    np.testing.assert_array_equal(again.states[0].amplitudes, [0.6, 0.8j])
    assert again.references == ["1"] and again.converged and again.seed == 4
    assert format_result(again) == format_result(small_result())


def test_result_without_certificate():
    result = small_result()
    result.e_w = result.bound = result.ed_energies = None
    again = parse_result(format_result(result))
    assert again.e_w is None and again.ed_energies is None


@pytest.mark.parametrize("text", ["", "format: 2\nK\t1\n", "format: 1\nK 1\n", "format: 1\nK\t1\n"])
def test_bad_result_records(text):
    with pytest.raises(ResultFormatError):
        parse_result(text)


#############################
# CSV

def test_csv_header_and_rows():
    rows = result_rows("0.70", small_result(), fidelities=[0.999])
    stream = io.StringIO()
    write_sweep_csv(rows, stream)
    table = list(csv.reader(io.StringIO(stream.getvalue())))
    assert table[0] == ["label", "j", "energy_ha", "ed_energy_ha", "abs_err_ha", "fidelity", "e_w", "bound"]
    assert tuple(table[0]) == CSV_COLUMNS
    assert table[1] == ["0.70", "0", "-1", "-1", "0", "0.999", "0", "0"]


def test_csv_blank_cells_without_reference():
    result = small_result()
    result.ed_energies = result.e_w = result.bound = None
    stream = io.StringIO()
    write_sweep_csv(result_rows("x", result), stream)
    assert stream.getvalue().splitlines()[1] == "x,0,-1,,,,,"


#############################
# sweeps

def test_single_point_sweep():
    manifest = read_manifest(os.path.join(DATA_DIR, "h2_0.70.sweep"))
    rows = run_sweep(manifest)
    assert [row["j"] for row in rows] == [0, 1, 2, 3]
    assert all(row["abs_err_ha"] <= CHEMICAL_ACCURACY for row in rows)
    assert all(row["fidelity"] >= 0.99 for row in rows)


def test_parallel_sweep_keeps_manifest_order(tmp_path):
    for label in ("a", "b"):
        (tmp_path / ("%s.ham" % label)).write_text(open(H2_FILE).read())
    manifest = SweepManifest([("b", str(tmp_path / "b.ham")), ("a", str(tmp_path / "a.ham"))])
    config = QpvqeConfig(n_states=2, n_particles=2, sz=0.0, max_iterations=50)
    rows = run_sweep(manifest, config, jobs=2)
    assert [row["label"] for row in rows] == ["b", "b", "a", "a"]
    assert rows[0]["energy_ha"] == rows[2]["energy_ha"]


def test_h2_curve_manifest_points_are_shipped():
    manifest = read_manifest(os.path.join(DATA_DIR, "h2_sweep.sweep"))
    assert len(manifest.points) == 26
    for _, path in manifest.points:
        assert os.path.exists(path), path


@pytest.mark.parametrize("name, n_qubits, n_particles, ground", [
    ("h2_0.50.ham", 4, 2, -1.0551597945),
    ("h2_1.00.ham", 4, 2, -1.1011503302),
    ("h2_3.00.ham", 4, 2, -0.9336318446),
    ("lih_1.60.ham", 10, 2, -7.8820965999),
    ("h4_1.00.ham", 8, 4, -2.1663874486),
])
def test_shipped_fixture_ground_energies(name, n_qubits, n_particles, ground):
    h = load_hamiltonian(fixture_path(name))
    assert h.n_qubits == n_qubits
    ed = exact_diagonalize(h, (n_particles, 0.0), 1)
    assert ed.energies[0] == pytest.approx(ground, abs=1e-8)


@pytest.mark.slow
def test_h2_dissociation_curve():
    manifest = read_manifest(os.path.join(DATA_DIR, "h2_sweep.sweep"))
    rows = run_sweep(manifest, jobs=4)
    assert len(rows) == 26 * 4
    assert max(row["abs_err_ha"] for row in rows) <= CHEMICAL_ACCURACY
    assert min(row["fidelity"] for row in rows) >= 0.99
    for row in rows:
        assert row["e_w"] >= -1e-10


@pytest.mark.slow
@pytest.mark.parametrize("name, n_particles, tolerance", [
    ("lih_1.60.ham", 2, CHEMICAL_ACCURACY),
    ("h4_1.00.ham", 4, 5.0e-3),
])
def test_larger_molecules(name, n_particles, tolerance):
    h = load_hamiltonian(fixture_path(name))
    config = QpvqeConfig(n_states=4, n_particles=n_particles, sz=0.0)
    ed = exact_diagonalize(h, ed_sector(h, config), 4)
    result = run_qpvqe(h, config, ed_energies=ed.energies)
    np.testing.assert_allclose(result.energies, ed.energies, atol=tolerance)
