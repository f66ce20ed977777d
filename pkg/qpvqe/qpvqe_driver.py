#--------------------------------#
# qpvqe_driver.py
#--------------------------------#
"""
The QP-VQE run: ensemble energy of the purified state, its minimisation,
extraction of the K eigenpairs and the weighted error certificate.
"""

import logging

import numpy as np

from .qpvqe_ansatz import apply_ansatz, build_uccgsd, ensemble_gradient, gradient
from .qpvqe_errors import (CertificateError, DimensionMismatchError, DivergenceError,
                           SectorError)
from .qpvqe_fermion import enumerate_sz_excitations
from .qpvqe_other_functions import progress as progress_bar
from .qpvqe_parameter_files import QpvqeConfig
from .qpvqe_pauli import expectation
from .qpvqe_state_prep import (PurifiedPrep, ReferenceSet, WeightVector,
                               default_references, default_weights)
from .qpvqe_statevector import StateVector, basis_index, subspace_overlap

logger = logging.getLogger(__name__)

# steps raising the objective by more than this are rejected
ACCEPT_TOL = 1.0e-7
CERTIFICATE_TOL = 1.0e-10
ORDER_TOL = 1.0e-10
MIN_STEP_SCALE = 1.0e-10
# max-norm of the gradient a converged Adam run must reach
GRADIENT_TOL = 1.0e-4


class SpectrumResult(object):
    """
    Outcome of one optimisation: the parameters, the K energies and states
    in weight order, the trace of the ensemble energy and, when an exact
    reference was supplied, the certificate (e_w, bound).
    """

    def __init__(self, *args, **kwargs):

        self.theta_star = kwargs.get("theta_star")
        self.energies = kwargs.get("energies")
        self.states = kwargs.get("states")
        self.ensemble_trace = kwargs.get("ensemble_trace")
        self.e_w = kwargs.get("e_w")
        self.bound = kwargs.get("bound")
        self.iterations_used = kwargs.get("iterations_used")
        self.converged = kwargs.get("converged")
        self.ordered = kwargs.get("ordered")
        self.weights = kwargs.get("weights")
        self.references = kwargs.get("references")
        self.ed_energies = kwargs.get("ed_energies")
        self.optimizer = kwargs.get("optimizer")
        self.seed = kwargs.get("seed")
        self.final_value = kwargs.get("final_value")

        if (self.ensemble_trace is None):
            self.ensemble_trace = []
        if (self.converged is None):
            self.converged = False
        if (self.iterations_used is None):
            self.iterations_used = 0
        if (self.theta_star is not None):
            self.theta_star = np.asarray(self.theta_star, dtype=float)
        if (self.final_value is None and len(self.ensemble_trace) > 0):
            self.final_value = self.ensemble_trace[-1]

    @property
    def K(self):
        return 0 if self.energies is None else len(self.energies)

    @property
    def certificate_ok(self):
        """Whether sum_j |eps_j - E_j| stays within the bound; None without a reference."""
        if self.bound is None or self.ed_energies is None:
            return None
        total = float(np.sum(np.abs(np.asarray(self.energies) - np.asarray(self.ed_energies))))
        return total <= self.bound + CERTIFICATE_TOL

    def summary(self):
        lines = ["optimizer %s, %d iterations, %s" % (
            self.optimizer, self.iterations_used, "converged" if self.converged else "not converged")]
        if self.final_value is not None:
            lines.append("ensemble energy %.12f Ha" % self.final_value)
        for j in range(self.K):
            line = "  state %d: %.12f Ha" % (j, self.energies[j])
            if self.ed_energies is not None:
                line += "  (ED %.12f, error %.3e)" % (self.ed_energies[j], self.energies[j] - self.ed_energies[j])
            lines.append(line)
        if self.bound is not None:
            lines.append("e_w = %.6e Ha, bound = %.6e Ha%s" % (
                self.e_w, self.bound, "" if self.certificate_ok else " (exceeded)"))
        if self.ordered is False:
            lines.append("warning: energies are not weakly ascending")
        return "\n".join(lines)

    def __repr__(self):
        return "SpectrumResult(K=%d, iterations=%d)" % (self.K, self.iterations_used)


def build_problem(h, config):
    """
    Circuit and purified preparation for the Hamiltonian h under config:
    full UCCGSD unless an effective excitation list is set, references from
    the config or the lowest diagonal energies of the sector.
    """
    if h.n_qubits % 2:
        raise DimensionMismatchError("interleaved encoding needs an even qubit count, got %d" % h.n_qubits)
    n_spatial = h.n_qubits // 2
    n_particles = config.n_particles
    if n_particles is None:
        n_particles = n_spatial
    sz = config.sz
    if sz is None:
        sz = 0.0 if n_particles % 2 == 0 else 0.5
    if config.references is not None:
        refs = ReferenceSet(config.references)
        if refs.n_qubits != h.n_qubits:
            raise DimensionMismatchError("%d-qubit references for a %d-qubit Hamiltonian" % (refs.n_qubits, h.n_qubits))
        if refs.n_particles != n_particles or abs(refs.sz - sz) > 1.0e-12:
            if config.n_particles is not None or config.sz is not None:
                raise SectorError("references lie outside the configured sector")
    else:
        refs = default_references(h, n_particles, sz, config.n_states)
    if config.weights is not None:
        weights = WeightVector(config.weights)
    else:
        weights = default_weights(config.n_states)

    if config.excitations is not None:
        generators = enumerate_sz_excitations(n_spatial, mode="effective", excitations=config.excitations)
    else:
        generators = enumerate_sz_excitations(n_spatial, config.include_singles, config.include_doubles,
                                              share_spin=config.share_spin)
    circuit = build_uccgsd(generators, h.n_qubits, config.trotter_steps)
    prep = PurifiedPrep(weights, refs)
    logger.info("problem: %d qubits, K=%d, %d parameters, %d rotations",
                h.n_qubits, prep.K, circuit.parameter_count, len(circuit.rotations))
    return circuit, prep


def _check_dimensions(h, circuit, prep):
    if h.n_qubits != circuit.n_working_qubits or prep.n_working != circuit.n_working_qubits:
        raise DimensionMismatchError("Hamiltonian (%d), ansatz (%d) and references (%d) disagree on the working register"
                                     % (h.n_qubits, circuit.n_working_qubits, prep.n_working))


def ensemble_energy(h, circuit, prep, theta):
    """L_w(theta) = <Phi(w)| U^dagger H U (x) 1 |Phi(w)>, one expectation."""
    _check_dimensions(h, circuit, prep)
    state = prep.purified.copy()
    apply_ansatz(circuit, theta, state)
    return expectation(h, state)


def weighted_state_energy(h, circuit, refs, weights, theta):
    """sum_j w_j <D_j| U^dagger H U |D_j>, one state at a time."""
    if not isinstance(weights, WeightVector):
        weights = WeightVector(weights)
    total = 0.0
    for w, det in zip(weights.w, refs.determinants):
        amplitudes = np.zeros(1 << circuit.n_working_qubits, dtype=complex)
        amplitudes[basis_index(det)] = 1.0
        state = apply_ansatz(circuit, theta, StateVector(circuit.n_working_qubits, amplitudes))
        total += w * expectation(h, state)
    return total


def _value_and_gradient(h, circuit, prep, theta, method, jobs):
    state = prep.purified
    if method == "parameter_shift":
        value = ensemble_energy(h, circuit, prep, theta)
        grad = gradient(circuit, theta, lambda s: expectation(h, s), state, jobs=jobs)
        return value, grad
    return ensemble_gradient(circuit, theta, h, state)


def _initial_theta(circuit, config):
    if config.theta0 is None:
        return np.zeros(circuit.parameter_count)
    return circuit.check_theta(config.theta0).copy()


def _converged(trace, window, threshold):
    return len(trace) > window and abs(trace[-1] - trace[-1 - window]) < threshold


def adam_optimize(h, circuit, prep, config, progress=False):
    """
    Adam on L_w with step acceptance. A step that raises L_w by more than
    ACCEPT_TOL is rejected, the moments are restored and the step scale is
    halved; accepted steps regrow the scale up to 1. Convergence needs the
    windowed change of L_w below the threshold and the gradient max-norm
    within GRADIENT_TOL. Returns (theta, trace, iterations, converged).
    """
    _check_dimensions(h, circuit, prep)
    theta = _initial_theta(circuit, config)
    value, grad = _value_and_gradient(h, circuit, prep, theta, config.gradient_method, config.jobs)
    if not np.isfinite(value):
        raise DivergenceError("non-finite ensemble energy", 0)
    trace = [value]
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    accepted = 0
    scale = 1.0
    converged = False
    iteration = 0
    beta1, beta2 = config.adam_beta1, config.adam_beta2
    for iteration in progress_bar(range(1, config.max_iterations + 1), progress, desc="adam"):
        m_new = beta1 * m + (1.0 - beta1) * grad
        v_new = beta2 * v + (1.0 - beta2) * grad ** 2
        t = accepted + 1
        m_hat = m_new / (1.0 - beta1 ** t)
        v_hat = v_new / (1.0 - beta2 ** t)
        trial = theta - config.adam_lr * scale * m_hat / (np.sqrt(v_hat) + config.adam_eps)
        trial_value, trial_grad = _value_and_gradient(h, circuit, prep, trial,
                                                      config.gradient_method, config.jobs)
        if not np.isfinite(trial_value) or not np.all(np.isfinite(trial_grad)):
            raise DivergenceError("non-finite ensemble energy", iteration)
        if trial_value > value + ACCEPT_TOL:
            scale *= 0.5
            logger.debug("iteration %d: rejected step (%.12f > %.12f), scale %.3g",
                         iteration, trial_value, value, scale)
            if scale < MIN_STEP_SCALE:
                logger.info("step scale exhausted at iteration %d", iteration)
                break
            continue
        theta, value, grad = trial, trial_value, trial_grad
        m, v = m_new, v_new
        accepted += 1
        scale = min(1.0, 2.0 * scale)
        trace.append(value)
        logger.debug("iteration %d: L_w = %.12f", iteration, value)
        if (_converged(trace, config.convergence_window, config.convergence_threshold)
                and np.max(np.abs(grad), initial=0.0) <= GRADIENT_TOL):
            converged = True
            break
    if not converged:
        converged = (_converged(trace, config.convergence_window, config.convergence_threshold)
                     and np.max(np.abs(grad), initial=0.0) <= GRADIENT_TOL)
    logger.info("adam finished after %d iterations (%d accepted), L_w = %.12f, %s",
                iteration, accepted, value, "converged" if converged else "not converged")
    return theta, trace, iteration, converged


def extract_eigenpairs(circuit, theta_star, refs, h):
    """
    |eps_j> = U(theta*) |D_j> on the working register and
    eps_j = <eps_j|H|eps_j>, j in weight order.
    """
    if not isinstance(refs, ReferenceSet):
        refs = ReferenceSet(refs)
    if refs.n_qubits != circuit.n_working_qubits:
        raise DimensionMismatchError("%d-qubit references for a %d-qubit ansatz" % (refs.n_qubits, circuit.n_working_qubits))
    energies = []
    states = []
    for det in refs.determinants:
        amplitudes = np.zeros(1 << circuit.n_working_qubits, dtype=complex)
        amplitudes[basis_index(det)] = 1.0
        state = apply_ansatz(circuit, theta_star, StateVector(circuit.n_working_qubits, amplitudes))
        states.append(state)
        energies.append(expectation(h, state))
    return np.array(energies), states


def is_weakly_ordered(energies, tol=ORDER_TOL):
    energies = np.asarray(energies)
    return bool(np.all(np.diff(energies) >= -tol))


def certificate_terms(result, weights, ed_energies):
    """
    (e_w, bound, total) with e_w = sum_j w_j (eps_j - E_j), the bound
    2 e_w / min_{i<j} |w_i - w_j| (e_w itself for K = 1) and
    total = sum_j |eps_j - E_j|. A negative e_w raises CertificateError.
    """
    if ed_energies is None:
        raise ValueError("error_bound needs exact reference energies")
    if not isinstance(weights, WeightVector):
        weights = WeightVector(weights)
    energies = np.asarray(getattr(result, "energies", result), dtype=float)
    exact = np.asarray(ed_energies, dtype=float)[:weights.K]
    if energies.shape[0] != weights.K or exact.shape[0] != weights.K:
        raise DimensionMismatchError("%d energies, %d references and %d weights"
                                     % (energies.shape[0], exact.shape[0], weights.K))
    errors = energies - exact
    e_w = float(np.dot(weights.w, errors))
    if e_w < -CERTIFICATE_TOL:
        raise CertificateError("e_w = %.3e is negative; ensemble energy fell below the exact bound" % e_w)
    if weights.K == 1:
        bound = max(e_w, 0.0)
    else:
        bound = 2.0 * max(e_w, 0.0) / weights.min_gap()
    return e_w, bound, float(np.sum(np.abs(errors)))


def error_bound(result, weights, ed_energies):
    """
    e_w and its bound on sum_j |eps_j - E_j|, raising CertificateError when
    the energies violate it. `result` is a SpectrumResult or an array of
    energies.
    """
    e_w, bound, total = certificate_terms(result, weights, ed_energies)
    if total > bound + CERTIFICATE_TOL:
        raise CertificateError("sum of state errors %.3e exceeds the bound %.3e" % (total, bound))
    return e_w, bound


def finish(h, circuit, prep, theta, trace, iterations, converged, config, ed_energies=None):
    """
    Eigenpairs, ordering flag and certificate around an optimised theta.
    The bound only holds at a stationary point: a converged run that breaks
    it raises CertificateError, an unconverged one is returned with
    certificate_ok False.
    """
    energies, states = extract_eigenpairs(circuit, theta, prep.refs, h)
    ordered = is_weakly_ordered(energies)
    if not ordered:
        logger.warning("extracted energies are not weakly ascending: %s", np.array2string(energies, precision=9))
    e_w = bound = None
    if ed_energies is not None:
        e_w, bound, total = certificate_terms(energies, prep.weights, ed_energies)
        if total > bound + CERTIFICATE_TOL:
            if converged:
                raise CertificateError("sum of state errors %.3e exceeds the bound %.3e" % (total, bound))
            logger.warning("run not converged: sum of state errors %.3e exceeds the bound %.3e",
                           total, bound)
    return SpectrumResult(theta_star=theta, energies=energies, states=states,
                          ensemble_trace=list(trace), e_w=e_w, bound=bound,
                          iterations_used=iterations, converged=converged, ordered=ordered,
                          weights=prep.weights.w.copy(), references=prep.refs.labels(),
                          ed_energies=None if ed_energies is None else np.asarray(ed_energies)[:prep.K],
                          optimizer=config.optimizer, seed=config.seed)


def optimize(h, circuit, prep, config=None, ed_energies=None, objective=None, rng=None, progress=False):
    """
    Minimise the ensemble energy and extract the eigenpairs.

    Adam uses exact gradients of the noiseless ensemble energy. SPSA
    minimises `objective` (theta -> energy; the noisy estimator in a noisy
    run, the noiseless ensemble energy otherwise) with the stream `rng`.
    Eigenpairs are always extracted noiselessly.
    """
    if config is None:
        config = QpvqeConfig()
    config.validate()
    _check_dimensions(h, circuit, prep)
    logger.info("optimizing with %s, K=%d, seed %d", config.optimizer, prep.K, config.seed)
    if config.optimizer == "spsa":
        from .qpvqe_noise import spsa_optimize
        from .qpvqe_other_functions import rng_stream
        if objective is None:
            def objective(theta):
                return ensemble_energy(h, circuit, prep, theta)
        if rng is None:
            rng = rng_stream(config.seed)
        run = spsa_optimize(objective, config, _initial_theta(circuit, config), rng=rng, progress=progress)
        result = finish(h, circuit, prep, run.theta_star, run.ensemble_trace, run.iterations_used,
                        run.converged, config, ed_energies)
        result.final_value = run.final_value
        return result
    theta, trace, iterations, converged = adam_optimize(h, circuit, prep, config, progress=progress)
    return finish(h, circuit, prep, theta, trace, iterations, converged, config, ed_energies)


def run_qpvqe(h, config=None, ed_energies=None, progress=False):
    """build_problem followed by optimize."""
    if config is None:
        config = QpvqeConfig()
    circuit, prep = build_problem(h, config)
    return optimize(h, circuit, prep, config, ed_energies=ed_energies, progress=progress)


def fidelities_against(ed, states, tol=1.0e-6):
    """
    Fidelity of each extracted state with the exact level of the same index.
    Degenerate exact levels (within tol) are compared through the projector
    onto their whole eigenspace.
    """
    energies = np.asarray(ed.energies)
    vectors = np.asarray(ed.vectors)
    fidelities = []
    for j, state in enumerate(states):
        block = np.where(np.abs(energies - energies[j]) < tol)[0]
        fidelities.append(subspace_overlap(vectors[:, block], state))
    return np.array(fidelities)
