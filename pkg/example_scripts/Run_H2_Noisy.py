"""
Script to run QP-VQE for H2 with SPSA on the ibmq_manila noise model and
compare the stabilized ensemble energy with the exact and the totally
mixed values.
"""

import logging

import numpy as np
import qpvqe
from qpvqe.qpvqe_driver import weighted_state_energy
from qpvqe.qpvqe_harness import ed_sector
from qpvqe.qpvqe_noise import noisy_objective, totally_mixed_energy
from qpvqe.qpvqe_other_functions import rng_stream


if __name__=="__main__":

    logging.basicConfig(level=logging.INFO)

    config = qpvqe.QpvqeConfig.read("data/h2_noisy.param")
    h = qpvqe.load_hamiltonian(config.hamiltonian)
    calib = qpvqe.load_calibration(config.calibration)

    circuit, prep = qpvqe.build_problem(h, config)
    sampler = qpvqe.ShotSampler(config.shots, rng_stream(config.seed, 1))
    objective = noisy_objective(h, circuit, prep, calib, sampler, config.compile_method)
    result = qpvqe.optimize(h, circuit, prep, config, objective=objective,
                            rng=rng_stream(config.seed, 0), progress=True)

    ed = qpvqe.exact_diagonalize(h, ed_sector(h, config), config.n_states)
    exact = float(np.dot(prep.weights.w, ed.energies))
    plateau = np.mean(result.ensemble_trace[-100:])
    print("noisy plateau     % .6f Ha" % plateau)
    print("exact ensemble    % .6f Ha" % exact)
    print("noiseless at theta* % .6f Ha" % weighted_state_energy(h, circuit, prep.refs, prep.weights, result.theta_star))
    print("totally mixed     % .6f Ha" % totally_mixed_energy(h))
