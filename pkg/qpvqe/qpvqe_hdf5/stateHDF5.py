'''
Reading and writing HDF5 archives of QP-VQE results
'''

import logging
import os

import h5py
import numpy as np

from ..qpvqe_errors import ResultFormatError

logger = logging.getLogger(__name__)

datablocks = {"THET": ["ThetaStar", 1],
              "ENER": ["Energies", 1],
              "EDEN": ["EDEnergies", 1],
              "WGHT": ["Weights", 1],
              "TRAC": ["EnsembleTrace", 1],
              "AMPL": ["Amplitudes", 2]}


class result_header:
    def __init__(self, *args, **kwargs):
        if (len(args) == 1):
            filename = args[0]
            if os.path.exists(filename):
                curfilename = filename
            elif os.path.exists(filename+".hdf5"):
                curfilename = filename+".hdf5"
            else:
                raise ResultFormatError("[error] file not found : %s" % filename)
            with h5py.File(curfilename, "r") as f:
                if "Header" not in f:
                    raise ResultFormatError("[error] no Header group in %s" % curfilename)
                header_dict = dict(f["Header"].attrs)
            self.K = int(header_dict['NumStates'])
            self.n_qubits = int(header_dict['NumQubits'])
            self.optimizer = str(header_dict['Optimizer'])
            self.seed = int(header_dict['Seed'])
            self.iterations_used = int(header_dict['IterationsUsed'])
            self.converged = bool(header_dict['Flag_Converged'])
            self.ordered = bool(header_dict['Flag_Ordered'])
            self.e_w = _nan_to_none(header_dict['EnsembleError'])
            self.bound = _nan_to_none(header_dict['ErrorBound'])
            self.final_value = _nan_to_none(header_dict['FinalValue'])
            self.references = str(header_dict['References']).split()
        else:
            # read arguments
            self.K = kwargs.get("K")
            self.n_qubits = kwargs.get("n_qubits")
            self.optimizer = kwargs.get("optimizer")
            self.seed = kwargs.get("seed")
            self.iterations_used = kwargs.get("iterations_used")
            self.converged = kwargs.get("converged")
            self.ordered = kwargs.get("ordered")
            self.e_w = kwargs.get("e_w")
            self.bound = kwargs.get("bound")
            self.final_value = kwargs.get("final_value")
            self.references = kwargs.get("references")

            # set default values
            if (self.K is None):
                self.K = 0
            if (self.n_qubits is None):
                self.n_qubits = 0
            if (self.optimizer is None):
                self.optimizer = "adam"
            if (self.seed is None):
                self.seed = 0
            if (self.iterations_used is None):
                self.iterations_used = 0
            if (self.converged is None):
                self.converged = False
            if (self.ordered is None):
                self.ordered = True
            if (self.references is None):
                self.references = []


def _nan_to_none(value):
    value = float(value)
    return None if np.isnan(value) else value


def _none_to_nan(value):
    return np.nan if value is None else float(value)


#######################
#OPEN FILE FOR WRITING#
#######################
def openfile(filename):
    return h5py.File(filename, mode="w")


def closefile(f):
    f.close()


############################
#WRITE RESULT HEADER OBJECT#
############################
def writeheader(f, header):
    group_header = f.create_group("Header")
    group_header.attrs["NumStates"] = header.K
    group_header.attrs["NumQubits"] = header.n_qubits
    group_header.attrs["Optimizer"] = header.optimizer
    group_header.attrs["Seed"] = header.seed
    group_header.attrs["IterationsUsed"] = header.iterations_used
    group_header.attrs["Flag_Converged"] = int(bool(header.converged))
    group_header.attrs["Flag_Ordered"] = int(bool(header.ordered))
    group_header.attrs["EnsembleError"] = _none_to_nan(header.e_w)
    group_header.attrs["ErrorBound"] = _none_to_nan(header.bound)
    group_header.attrs["FinalValue"] = _none_to_nan(header.final_value)
    group_header.attrs["References"] = " ".join(header.references)


###############
#WRITE ROUTINE#
###############
def write_block(f, block, data):
    if block not in datablocks:
        raise ResultFormatError("[error] Block type %s not known!" % block)
    group = f.require_group("Result")
    block_name = datablocks[block][0]
    if block_name in group:
        logger.warning("I/O block %s already written", block)
        return
    group.create_dataset(block_name, data=data)


##############
#READ ROUTINE#
##############
def read_block(filename, block):
    if block not in datablocks:
        raise ResultFormatError("[error] Block type %s not known!" % block)
    block_name, dim2 = datablocks[block]
    with h5py.File(filename, "r") as f:
        if "Result" not in f or block_name not in f["Result"]:
            return None
        data = f["Result"][block_name][:]
    if dim2 > 1 and data.ndim == 1:
        data = data.reshape(1, -1)
    return data


def write_result(result, filename):
    """Header attributes plus one dataset per block; states as complex amplitudes."""
    n_qubits = result.states[0].n_qubits if result.states else 0
    header = result_header(K=result.K, n_qubits=n_qubits, optimizer=result.optimizer,
                           seed=result.seed, iterations_used=result.iterations_used,
                           converged=result.converged, ordered=result.ordered,
                           e_w=result.e_w, bound=result.bound, final_value=result.final_value,
                           references=list(result.references))
    f = openfile(filename)
    try:
        writeheader(f, header)
        write_block(f, "THET", np.asarray(result.theta_star, dtype="float64"))
        write_block(f, "ENER", np.asarray(result.energies, dtype="float64"))
        write_block(f, "WGHT", np.asarray(result.weights, dtype="float64"))
        write_block(f, "TRAC", np.asarray(result.ensemble_trace, dtype="float64"))
        if result.ed_energies is not None:
            write_block(f, "EDEN", np.asarray(result.ed_energies, dtype="float64"))
        if result.states:
            write_block(f, "AMPL", np.array([s.amplitudes for s in result.states], dtype="complex128"))
    finally:
        closefile(f)
    logger.info("wrote HDF5 result %s", filename)


def read_result(filename):
    from ..qpvqe_driver import SpectrumResult
    from ..qpvqe_statevector import StateVector

    head = result_header(filename)
    amplitudes = read_block(filename, "AMPL")
    states = None
    if amplitudes is not None:
        states = [StateVector(head.n_qubits, row) for row in amplitudes]
    return SpectrumResult(theta_star=read_block(filename, "THET"),
                          energies=read_block(filename, "ENER"),
                          states=states,
                          ensemble_trace=list(read_block(filename, "TRAC")),
                          e_w=head.e_w, bound=head.bound,
                          iterations_used=head.iterations_used,
                          converged=head.converged, ordered=head.ordered,
                          weights=read_block(filename, "WGHT"),
                          references=head.references,
                          ed_energies=read_block(filename, "EDEN"),
                          optimizer=head.optimizer, seed=head.seed,
                          final_value=head.final_value)
