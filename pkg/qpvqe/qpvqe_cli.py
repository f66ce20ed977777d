#!/usr/bin/env python
#--------------------------------#
# qpvqe_cli.py
#--------------------------------#
"""
Command line front end: `qpvqe run | sweep | ed | gaps | amplitudes | noisy-run`.

Results go to stdout (or --output) as "format: 1" records or CSV; log
messages go to stderr. Library failures are reported as "[error] ..." with
exit code 1.
"""

import argparse
import logging
import sys

import numpy as np

from .qpvqe_driver import build_problem, optimize, run_qpvqe
from .qpvqe_errors import ConfigError, QpvqeError
from .qpvqe_harness import (ed_sector, exact_diagonalize, format_result, load_hamiltonian,
                            read_manifest, read_result, run_sweep, write_sweep_csv)
from .qpvqe_noise import (load_calibration, noisy_objective, noisy_state_energies,
                          totally_mixed_energy, ShotSampler)
from .qpvqe_observables import (all_gaps, gap_from_full_purified, transition_from_full_purified,
                                transition_matrix)
from .qpvqe_other_functions import rng_stream, seed_from_environment
from .qpvqe_parameter_files import QpvqeConfig

logger = logging.getLogger(__name__)

_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _add_common(parser):
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (-v info, -vv debug)')
    parser.add_argument('--config', type=str, default=None,
                        help='parameter file')
    parser.add_argument('--seed', type=int, default=None,
                        help='random seed (falls back to $QPVQE_SEED, then the parameter file)')
    parser.add_argument('--jobs', type=int, default=None,
                        help='worker count for gradients and sweep points')
    parser.add_argument('--progress', action='store_true',
                        help='show progress bars')


def _add_states(parser):
    parser.add_argument('-k', '--states', type=int, default=None,
                        help='number of target states K')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='qpvqe',
        description='Excited-state spectra with the quantum purification VQE.')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    run = commands.add_parser('run', help='one noiseless optimization')
    _add_common(run)
    _add_states(run)
    run.add_argument('--hamiltonian', type=str, default=None)
    run.add_argument('--output', '-o', type=str, default=None,
                     help='result record file (default stdout)')
    run.add_argument('--hdf5', type=str, default=None,
                     help='also archive the result as HDF5')
    run.add_argument('--certify', action='store_true',
                     help='diagonalize the sector exactly and attach e_w and its bound')

    sweep = commands.add_parser('sweep', help='run every point of a manifest, CSV out')
    _add_common(sweep)
    sweep.add_argument('--manifest', type=str, required=True)
    sweep.add_argument('--output', '-o', type=str, default=None,
                       help='CSV file (default stdout)')

    ed = commands.add_parser('ed', help='exact spectrum of a Hamiltonian')
    _add_common(ed)
    _add_states(ed)
    ed.add_argument('--hamiltonian', type=str, default=None)
    ed.add_argument('--sector', type=str, default=None,
                    help='N,Sz restriction, e.g. 2,0')

    for name, text in (('gaps', 'energy gaps from the ancilla readout'),
                       ('amplitudes', 'transition amplitudes <eps_i|O|eps_j>')):
        sub = commands.add_parser(name, help=text)
        _add_common(sub)
        sub.add_argument('--result', type=str, required=True,
                         help='result record (or .hdf5 archive) written by run')
        sub.add_argument('--hamiltonian', type=str, default=None)
        sub.add_argument('--method', choices=('pair', 'full'), default='pair',
                         help='pair states or the full equal-branch state')
        if name == 'amplitudes':
            sub.add_argument('--observable', type=str, default=None,
                             help='operator file in Hamiltonian format (default: the Hamiltonian)')

    noisy = commands.add_parser('noisy-run', help='SPSA on the noisy density matrix simulation')
    _add_common(noisy)
    _add_states(noisy)
    noisy.add_argument('--hamiltonian', type=str, default=None)
    noisy.add_argument('--calibration', type=str, default=None)
    noisy.add_argument('--shots', type=int, default=None,
                       help='shots per Pauli term, 0 for exact expectations')
    noisy.add_argument('--gate-time', type=float, default=None,
                       help='single-qubit gate time in ns, overrides the calibration')
    noisy.add_argument('--output', '-o', type=str, default=None)
    return parser


def load_config(args):
    """Parameter file (or defaults) with the command line overrides applied."""
    config = QpvqeConfig.read(args.config) if args.config else QpvqeConfig()
    overrides = {"seed": seed_from_environment(args.seed, default=config.seed)}
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "states", None) is not None:
        overrides["n_states"] = args.states
        if config.weights is not None and len(config.weights) != args.states:
            raise ConfigError("-k %d disagrees with the %d weights of %s"
                              % (args.states, len(config.weights), args.config))
    if getattr(args, "shots", None) is not None:
        overrides["shots"] = args.shots
    if getattr(args, "gate_time", None) is not None:
        overrides["gate_time_1q_ns"] = args.gate_time
    return config.copy(**overrides)


def _hamiltonian(args, config):
    path = args.hamiltonian or config.hamiltonian
    if path is None:
        raise ConfigError("no Hamiltonian: pass --hamiltonian or set HamiltonianFile")
    return load_hamiltonian(path)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _stored_result(path):
    if path.endswith(".hdf5"):
        from .qpvqe_hdf5 import read_result as read_hdf5
        return read_hdf5(path)
    return read_result(path)


def _stored_problem(args):
    """The result of a previous run and the circuit it was optimized on."""
    config = load_config(args)
    result = _stored_result(args.result)
    h = _hamiltonian(args, config)
    config = config.copy(n_states=result.K, weights=list(result.weights),
                         references=list(result.references))
    circuit, _ = build_problem(h, config)
    if circuit.parameter_count != len(result.theta_star):
        raise ConfigError("stored result has %d parameters, the configured ansatz %d"
                          % (len(result.theta_star), circuit.parameter_count))
    return h, config, result, circuit


#############################
# Subcommands

def command_run(args):
    config = load_config(args)
    h = _hamiltonian(args, config)
    ed_energies = None
    if args.certify:
        ed_energies = exact_diagonalize(h, ed_sector(h, config), config.n_states).energies
    result = run_qpvqe(h, config, ed_energies=ed_energies, progress=args.progress)
    logger.info(result.summary())
    _emit(format_result(result), args.output)
    if args.hdf5:
        from .qpvqe_hdf5 import write_result as write_hdf5
        write_hdf5(result, args.hdf5)
    return 0


def command_sweep(args):
    manifest = read_manifest(args.manifest)
    config = manifest.config()
    if args.config:
        config = QpvqeConfig.read(args.config)
    config = config.copy(seed=seed_from_environment(args.seed, default=config.seed))
    jobs = args.jobs if args.jobs is not None else config.jobs
    rows = run_sweep(manifest, config, jobs=jobs, progress=args.progress)
    if args.output is None:
        write_sweep_csv(rows, sys.stdout)
    else:
        with open(args.output, "w") as f:
            write_sweep_csv(rows, f)
    return 0


def _parse_sector(text):
    try:
        n_particles, sz = text.split(",")
        return int(n_particles), float(sz)
    except ValueError:
        raise ConfigError("--sector expects N,Sz, got '%s'" % text)


def command_ed(args):
    config = load_config(args)
    h = _hamiltonian(args, config)
    sector = None if args.sector is None else _parse_sector(args.sector)
    ed = exact_diagonalize(h, sector, args.states)
    for j, energy in enumerate(ed.energies):
        sys.stdout.write("%d\t%.12f\n" % (j, energy))
    return 0


def command_gaps(args):
    h, config, result, circuit = _stored_problem(args)
    if args.method == "pair":
        table = all_gaps(result, h, circuit)
    sys.stdout.write("i\tj\tgap_ha\tdirect_ha\n")
    for i in range(result.K):
        for j in range(i + 1, result.K):
            if args.method == "pair":
                gap = table[i, j]
            else:
                gap = gap_from_full_purified(result, h, (i, j), circuit)
            sys.stdout.write("%d\t%d\t%.12f\t%.12f\n" % (i, j, gap, result.energies[i] - result.energies[j]))
    return 0


def command_amplitudes(args):
    h, config, result, circuit = _stored_problem(args)
    o = h if args.observable is None else load_hamiltonian(args.observable)
    if args.method == "pair":
        table = transition_matrix(result, o, circuit)
    sys.stdout.write("i\tj\tre\tim\n")
    for i in range(result.K):
        for j in range(i + 1, result.K):
            if args.method == "pair":
                value = table[i, j]
            else:
                value = transition_from_full_purified(result, o, (i, j), circuit)
            sys.stdout.write("%d\t%d\t%.12f\t%.12f\n" % (i, j, value.real, value.imag))
    return 0


def command_noisy_run(args):
    config = load_config(args).copy(optimizer="spsa")
    h = _hamiltonian(args, config)
    path = args.calibration or config.calibration
    if path is None:
        raise ConfigError("no calibration: pass --calibration or set CalibrationFile")
    calib = load_calibration(path)
    if config.gate_time_1q_ns is not None:
        calib.gate_time_1q_ns = config.gate_time_1q_ns
    calib.validate()
    circuit, prep = build_problem(h, config)
    sampler = ShotSampler(config.shots, rng_stream(config.seed, 1))
    objective = noisy_objective(h, circuit, prep, calib, sampler, config.compile_method)
    result = optimize(h, circuit, prep, config, objective=objective,
                      rng=rng_stream(config.seed, 0), progress=args.progress)
    logger.info(result.summary())
    energies = noisy_state_energies(h, circuit, prep.refs, result.theta_star, calib,
                                    None, config.compile_method)
    sys.stderr.write("noisy state energies: %s\n" % np.array2string(energies, precision=9))
    sys.stderr.write("totally mixed energy: %.9f\n" % totally_mixed_energy(h))
    _emit(format_result(result), args.output)
    return 0


_COMMANDS = {
    "run": command_run,
    "sweep": command_sweep,
    "ed": command_ed,
    "gaps": command_gaps,
    "amplitudes": command_amplitudes,
    "noisy-run": command_noisy_run,
}


def run_cli(argv=None):
    """Parse argv, run one subcommand and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit:
        return exit.code
    logging.basicConfig(level=_LEVELS[min(args.verbose, len(_LEVELS) - 1)],
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except (QpvqeError, OSError) as err:
        sys.stderr.write("[error] %s\n" % err)
        return 1


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
