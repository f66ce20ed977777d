#--------------------------------#
# qpvqe_harness.py
#--------------------------------#
"""
File formats and the exact reference around the QP-VQE engine:
Hamiltonian files, exact diagonalization in a particle-number / S_z
sector, sweep manifests, result records and the sweep CSV.
"""

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy.linalg

from .qpvqe_driver import SpectrumResult, fidelities_against, run_qpvqe
from .qpvqe_errors import (HamiltonianParseError, ManifestError, ResultFormatError,
                           ResourceGuardError, SectorError)
from .qpvqe_other_functions import progress as progress_bar
from .qpvqe_parameter_files import QpvqeConfig
from .qpvqe_pauli import MATRIX_QUBIT_GUARD, PauliString, PauliSum, to_matrix
from .qpvqe_state_prep import sector_determinants
from .qpvqe_statevector import StateVector, basis_index

logger = logging.getLogger(__name__)

RESULT_FORMAT = "1"
CSV_COLUMNS = ("label", "j", "energy_ha", "ed_energy_ha", "abs_err_ha", "fidelity", "e_w", "bound")


#############################
# Hamiltonian files

def parse_hamiltonian(text):
    """
    'qubits <n>' on the first non-comment line, then '<float> <word>' per
    term; '#' starts a comment. Duplicate words are summed.
    """
    n_qubits = None
    terms = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split(None, 1)
        if n_qubits is None:
            if fields[0] != "qubits" or len(fields) != 2:
                raise HamiltonianParseError("expected 'qubits <n>' header", number)
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise HamiltonianParseError("bad qubit count '%s'" % fields[1], number)
            if n_qubits < 1:
                raise HamiltonianParseError("qubit count must be positive", number)
            continue
        try:
            coefficient = float(fields[0])
        except ValueError:
            raise HamiltonianParseError("coefficient '%s' is not a real number" % fields[0], number)
        if len(fields) < 2:
            raise HamiltonianParseError("term without a Pauli word", number)
        letters = []
        for factor in fields[1].split():
            if factor == "I":
                continue
            letter, index = factor[0], factor[1:]
            if letter not in ("X", "Y", "Z"):
                raise HamiltonianParseError("unknown Pauli letter in '%s'" % factor, number)
            if not index.isdigit():
                raise HamiltonianParseError("malformed factor '%s'" % factor, number)
            if int(index) >= n_qubits:
                raise HamiltonianParseError("qubit index %s outside 0..%d" % (index, n_qubits - 1), number)
            letters.append((int(index), letter))
        try:
            terms.append((coefficient, PauliString(n_qubits, letters)))
        except ValueError as err:
            raise HamiltonianParseError(str(err), number)
    if n_qubits is None:
        raise HamiltonianParseError("missing 'qubits <n>' header")
    h = PauliSum(n_qubits, terms)
    if not h.is_hermitian():
        raise HamiltonianParseError("imaginary residue after collecting terms")
    return h.real()


def load_hamiltonian(path):
    with open(path) as f:
        return parse_hamiltonian(f.read())


def format_hamiltonian(h):
    """Header, then one term per line in canonical order, 17 significant digits."""
    lines = ["qubits %d" % h.n_qubits]
    for string in sorted(h.strings(), key=lambda s: s.sort_key()):
        lines.append("%.17g %s" % (h.coefficient(string).real, string.label()))
    return "\n".join(lines) + "\n"


def write_hamiltonian(h, path):
    with open(path, "w") as f:
        f.write(format_hamiltonian(h))


#############################
# Exact diagonalization

class EDReference(object):
    """Lowest-K eigenpairs; vectors are columns over the full 2^n basis."""

    def __init__(self, energies, vectors, sector=None):
        self.energies = np.asarray(energies, dtype=float)
        self.vectors = np.asarray(vectors, dtype=complex)
        self.sector = sector

    @property
    def K(self):
        return self.energies.shape[0]

    def state(self, j):
        return StateVector(int(np.log2(self.vectors.shape[0])), self.vectors[:, j].copy())

    def __repr__(self):
        return "EDReference(sector=%r, energies=%s)" % (self.sector, np.array2string(self.energies, precision=9))


def sector_basis(n_qubits, n_particles, sz):
    """Ascending basis indices of the determinants in the (N, S_z) sector."""
    return sorted(basis_index(det) for det in sector_determinants(n_qubits, n_particles, sz))


def exact_diagonalize(h, sector=None, K=None):
    """
    Dense Hermitian eigendecomposition, restricted to the (N, S_z) sector
    when one is given; returns the lowest K pairs.
    """
    if h.n_qubits > MATRIX_QUBIT_GUARD:
        raise ResourceGuardError("exact diagonalization limited to %d qubits" % MATRIX_QUBIT_GUARD)
    matrix = to_matrix(h)
    dim = matrix.shape[0]
    if sector is not None:
        indices = np.array(sector_basis(h.n_qubits, sector[0], sector[1]), dtype=int)
        if indices.size == 0:
            raise SectorError("sector (N=%d, Sz=%g) is empty" % (sector[0], sector[1]))
        matrix = matrix[np.ix_(indices, indices)]
    else:
        indices = np.arange(dim)
    if K is None:
        K = matrix.shape[0]
    if K > matrix.shape[0]:
        raise SectorError("K = %d exceeds the sector dimension %d" % (K, matrix.shape[0]))
    energies, sub_vectors = scipy.linalg.eigh(matrix, subset_by_index=[0, K - 1])
    vectors = np.zeros((dim, K), dtype=complex)
    vectors[indices, :] = sub_vectors
    logger.info("ED: %d x %d block, lowest %s", matrix.shape[0], matrix.shape[0],
                np.array2string(energies, precision=9))
    return EDReference(energies, vectors, sector)


def subspace_fidelity(ed, states, tol=1.0e-6):
    """Per-state fidelity against the exact level, degenerate levels as subspaces."""
    return fidelities_against(ed, states, tol)


#############################
# Sweep manifests

class SweepManifest(object):

    def __init__(self, points, config_path=None, path=None):
        self.points = list(points)
        self.config_path = config_path
        self.path = path
        if not self.points:
            raise ManifestError("manifest lists no points")
        labels = [label for label, _ in self.points]
        if len(set(labels)) != len(labels):
            raise ManifestError("duplicate labels in manifest")

    def config(self):
        if self.config_path is None:
            return QpvqeConfig()
        return QpvqeConfig.read(self.config_path)

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return "SweepManifest(%d points)" % len(self.points)


def read_manifest(path):
    """'config <path>' (optional) and 'point <label> <path>' lines, relative to the manifest."""
    base = os.path.dirname(os.path.abspath(path))
    points = []
    config_path = None
    with open(path) as f:
        for number, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            if words[0] == "config" and len(words) == 2:
                config_path = os.path.join(base, words[1])
            elif words[0] == "point" and len(words) == 3:
                points.append((words[1], os.path.join(base, words[2])))
            else:
                raise ManifestError("%s line %d: cannot parse '%s'" % (path, number, line))
    return SweepManifest(points, config_path, path)


#############################
# Result records

def _floats(values):
    return " ".join("%.17g" % v for v in np.asarray(values, dtype=float).reshape(-1))


def format_result(result):
    """Versioned key<TAB>value record; no timestamps."""
    items = [
        ("K", "%d" % result.K),
        ("optimizer", "%s" % result.optimizer),
        ("seed", "%d" % result.seed),
        ("iterations_used", "%d" % result.iterations_used),
        ("converged", "%d" % int(bool(result.converged))),
        ("ordered", "%d" % int(bool(result.ordered))),
        ("references", " ".join(result.references)),
        ("weights", _floats(result.weights)),
        ("theta_star", _floats(result.theta_star)),
        ("energies", _floats(result.energies)),
        ("ensemble_trace", _floats(result.ensemble_trace)),
        ("final_value", "%.17g" % result.final_value if result.final_value is not None else "none"),
        ("e_w", "%.17g" % result.e_w if result.e_w is not None else "none"),
        ("bound", "%.17g" % result.bound if result.bound is not None else "none"),
        ("ed_energies", _floats(result.ed_energies) if result.ed_energies is not None else "none"),
    ]
    if result.states is not None:
        items.append(("n_qubits", "%d" % result.states[0].n_qubits))
        for j, state in enumerate(result.states):
            items.append(("state_%d_re" % j, _floats(state.amplitudes.real)))
            items.append(("state_%d_im" % j, _floats(state.amplitudes.imag)))
    lines = ["format: %s" % RESULT_FORMAT] + ["%s\t%s" % item for item in items]
    return "\n".join(lines) + "\n"


def write_result(result, path):
    with open(path, "w") as f:
        f.write(format_result(result))


def _read_floats(text):
    return np.array([float(v) for v in text.split()]) if text.strip() else np.zeros(0)


def _optional(fields, key, convert):
    value = fields.get(key, "none")
    return None if value == "none" else convert(value)


def parse_result(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != "format: %s" % RESULT_FORMAT:
        raise ResultFormatError("not a format %s result record" % RESULT_FORMAT)
    fields = {}
    for number, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ResultFormatError("line %d: expected key<TAB>value" % number)
        key, value = line.split("\t", 1)
        fields[key] = value
    try:
        K = int(fields["K"])
        states = None
        if "n_qubits" in fields:
            n_qubits = int(fields["n_qubits"])
            states = [StateVector(n_qubits, _read_floats(fields["state_%d_re" % j])
                                  + 1j * _read_floats(fields["state_%d_im" % j])) for j in range(K)]
        return SpectrumResult(
            theta_star=_read_floats(fields["theta_star"]),
            energies=_read_floats(fields["energies"]),
            states=states,
            ensemble_trace=list(_read_floats(fields["ensemble_trace"])),
            e_w=_optional(fields, "e_w", float),
            bound=_optional(fields, "bound", float),
            iterations_used=int(fields["iterations_used"]),
            converged=bool(int(fields["converged"])),
            ordered=bool(int(fields["ordered"])),
            weights=_read_floats(fields["weights"]),
            references=fields["references"].split(),
            ed_energies=_optional(fields, "ed_energies", _read_floats),
            optimizer=fields["optimizer"],
            seed=int(fields["seed"]),
            final_value=_optional(fields, "final_value", float))
    except KeyError as err:
        raise ResultFormatError("missing field %s" % err)
    except ValueError as err:
        raise ResultFormatError(str(err))


def read_result(path):
    with open(path) as f:
        return parse_result(f.read())


#############################
# Sweeps

def result_rows(label, result, fidelities=None):
    """One CSV row per state of a finished run."""
    rows = []
    for j in range(result.K):
        exact = None if result.ed_energies is None else result.ed_energies[j]
        rows.append({
            "label": label,
            "j": j,
            "energy_ha": result.energies[j],
            "ed_energy_ha": exact,
            "abs_err_ha": None if exact is None else abs(result.energies[j] - exact),
            "fidelity": None if fidelities is None else fidelities[j],
            "e_w": result.e_w,
            "bound": result.bound,
        })
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return "%.12g" % value
    return str(value)


def write_sweep_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[column]) for column in CSV_COLUMNS])


def ed_sector(h, config):
    """The (N, S_z) sector a run targets, with the same defaults as build_problem."""
    n_particles = config.n_particles
    if n_particles is None:
        n_particles = h.n_qubits // 2
    sz = config.sz
    if sz is None:
        sz = 0.0 if n_particles % 2 == 0 else 0.5
    return n_particles, sz


def run_point(label, path, config):
    """Load one Hamiltonian, run QP-VQE against its ED reference, return CSV rows."""
    h = load_hamiltonian(path)
    ed = exact_diagonalize(h, ed_sector(h, config), config.n_states)
    result = run_qpvqe(h, config, ed_energies=ed.energies)
    fidelities = fidelities_against(ed, result.states)
    logger.info("point %s done: max error %.3e Ha", label,
                np.max(np.abs(result.energies - ed.energies)))
    return result_rows(label, result, fidelities)


def _run_point_job(job):
    label, path, config = job
    return run_point(label, path, config)


def run_sweep(manifest, config=None, jobs=1, progress=False):
    """
    Every manifest point with the shared config; points run on up to `jobs`
    worker processes and rows come back in manifest order.
    """
    if config is None:
        config = manifest.config()
    work = [(label, path, config) for label, path in manifest.points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_point = list(progress_bar(pool.map(_run_point_job, work), progress,
                                          desc="sweep", total=len(work)))
    else:
        per_point = [_run_point_job(job) for job in progress_bar(work, progress, desc="sweep")]
    rows = []
    for point_rows in per_point:
        rows.extend(point_rows)
    return rows
