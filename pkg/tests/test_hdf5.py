import h5py
import numpy as np
import pytest

from qpvqe.qpvqe_errors import ResultFormatError
from qpvqe.qpvqe_hdf5 import (read_block, read_result, result_header, write_block, write_result,
                               writeheader)
from qpvqe.qpvqe_hdf5.stateHDF5 import openfile, closefile


def test_archive_of_h2_run(h2_run, tmp_path):
    path = str(tmp_path / "h2.hdf5")
    write_result(h2_run, path)
    again = read_result(path)
    np.testing.assert_array_equal(again.theta_star, h2_run.theta_star)
    np.testing.assert_array_equal(again.energies, h2_run.energies)
    np.testing.assert_array_equal(again.ed_energies, h2_run.ed_energies)
    assert again.references == h2_run.references
    assert (again.e_w, again.bound) == (h2_run.e_w, h2_run.bound)
    assert again.converged == h2_run.converged
    for mine, stored in zip(h2_run.states, again.states):
        np.testing.assert_array_equal(stored.amplitudes, mine.amplitudes)


def test_header_attributes(h2_run, tmp_path):
    path = str(tmp_path / "h2.hdf5")
    write_result(h2_run, path)
    with h5py.File(path, "r") as f:
        assert f["Header"].attrs["NumStates"] == 4
        assert f["Header"].attrs["Optimizer"] == "adam"
        assert f["Result"]["Amplitudes"].shape == (4, 16)
    head = result_header(path[:-len(".hdf5")])
    assert head.n_qubits == 4


def test_missing_certificate_reads_as_none(tmp_path):
    path = str(tmp_path / "bare.hdf5")
    f = openfile(path)
    header = result_header(K=1, references=["1"])
    writeheader(f, header)
    write_block(f, "ENER", np.array([-1.0]))
    closefile(f)
    head = result_header(path)
    assert head.e_w is None and head.bound is None
    assert read_block(path, "EDEN") is None


def test_unknown_block(tmp_path):
    f = openfile(str(tmp_path / "x.hdf5"))
    try:
        with pytest.raises(ResultFormatError):
            write_block(f, "NOPE", np.zeros(1))
    finally:
        closefile(f)


def test_missing_file():
    with pytest.raises(ResultFormatError):
        result_header("/nonexistent/run")
