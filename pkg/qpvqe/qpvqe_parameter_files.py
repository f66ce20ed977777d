#!/usr/bin/env python
#--------------------------------#
# qpvqe_parameter_files.py
#--------------------------------#
"""
Run configuration for QP-VQE and its plain text parameter file.

A parameter file is organised in sections introduced by lines starting with
'%----'; every other non-blank line holds a CamelCase parameter name, white
space, and a value.
"""

import logging
from collections import OrderedDict

from .qpvqe_errors import ConfigError

logger = logging.getLogger(__name__)

# Dictionary containing all parameters written in every file
parameters_basic = OrderedDict([
    # Ensemble
    ("NStates", "n_states"),
    ("NParticles", "n_particles"),
    ("SpinProjection", "sz"),
    # Ansatz
    ("TrotterSteps", "trotter_steps"),
    ("ShareSpin", "share_spin"),
    ("IncludeSingles", "include_singles"),
    ("IncludeDoubles", "include_doubles"),
    ("CompileMethod", "compile_method"),
    ("GradientMethod", "gradient_method"),
    # Optimizer
    ("Optimizer", "optimizer"),
    ("MaxIterations", "max_iterations"),
    ("ConvergenceThreshold", "convergence_threshold"),
    ("ConvergenceWindow", "convergence_window"),
    ("AdamLearningRate", "adam_lr"),
    ("AdamBeta1", "adam_beta1"),
    ("AdamBeta2", "adam_beta2"),
    ("AdamEpsilon", "adam_eps"),
    ("SpsaA", "spsa_a"),
    ("SpsaC", "spsa_c"),
    ("SpsaStability", "spsa_big_a"),
    ("SpsaAlpha", "spsa_alpha"),
    ("SpsaGamma", "spsa_gamma"),
    # Sampling and randomness
    ("Shots", "shots"),
    ("Seed", "seed"),
    ("Jobs", "jobs"),
])

# Optional parameters, written only when set
parameters_other = OrderedDict([
    ("Weights", "weights"),
    ("References", "references"),
    ("Excitations", "excitations"),
    ("InitialParameters", "theta0"),
    ("HamiltonianFile", "hamiltonian"),
    ("CalibrationFile", "calibration"),
    ("GateTime1qNs", "gate_time_1q_ns"),
])

_INTEGERS = ("n_states", "n_particles", "trotter_steps", "max_iterations",
             "convergence_window", "shots", "seed", "jobs")
_FLOATS = ("sz", "convergence_threshold", "adam_lr", "adam_beta1", "adam_beta2",
           "adam_eps", "spsa_a", "spsa_c", "spsa_big_a", "spsa_alpha", "spsa_gamma",
           "gate_time_1q_ns")
_BOOLEANS = ("share_spin", "include_singles", "include_doubles")
_FLOAT_LISTS = ("weights", "theta0")

_sections = [
    ("Ensemble", ("NStates", "NParticles", "SpinProjection")),
    ("Ansatz", ("TrotterSteps", "ShareSpin", "IncludeSingles", "IncludeDoubles", "CompileMethod",
                "GradientMethod")),
    ("Optimizer", ("Optimizer", "MaxIterations", "ConvergenceThreshold", "ConvergenceWindow",
                   "AdamLearningRate", "AdamBeta1", "AdamBeta2", "AdamEpsilon",
                   "SpsaA", "SpsaC", "SpsaStability", "SpsaAlpha", "SpsaGamma")),
    ("Sampling and randomness", ("Shots", "Seed", "Jobs")),
]


class QpvqeConfig(object):

    def __init__(self, *args, **kwargs):

        # Ensemble
        self.n_states = kwargs.get("n_states")
        self.weights = kwargs.get("weights")
        self.n_particles = kwargs.get("n_particles")
        self.sz = kwargs.get("sz")
        self.references = kwargs.get("references")

        # Ansatz
        self.trotter_steps = kwargs.get("trotter_steps")
        self.share_spin = kwargs.get("share_spin")
        self.include_singles = kwargs.get("include_singles")
        self.include_doubles = kwargs.get("include_doubles")
        self.excitations = kwargs.get("excitations")
        self.compile_method = kwargs.get("compile_method")
        self.gradient_method = kwargs.get("gradient_method")
        self.theta0 = kwargs.get("theta0")

        # Optimizer
        self.optimizer = kwargs.get("optimizer")
        self.max_iterations = kwargs.get("max_iterations")
        self.convergence_threshold = kwargs.get("convergence_threshold")
        self.convergence_window = kwargs.get("convergence_window")
        self.adam_lr = kwargs.get("adam_lr")
        self.adam_beta1 = kwargs.get("adam_beta1")
        self.adam_beta2 = kwargs.get("adam_beta2")
        self.adam_eps = kwargs.get("adam_eps")
        self.spsa_a = kwargs.get("spsa_a")
        self.spsa_c = kwargs.get("spsa_c")
        self.spsa_big_a = kwargs.get("spsa_big_a")
        self.spsa_alpha = kwargs.get("spsa_alpha")
        self.spsa_gamma = kwargs.get("spsa_gamma")

        # Sampling, noise and randomness
        self.shots = kwargs.get("shots")
        self.seed = kwargs.get("seed")
        self.jobs = kwargs.get("jobs")
        self.gate_time_1q_ns = kwargs.get("gate_time_1q_ns")

        # Input files
        self.hamiltonian = kwargs.get("hamiltonian")
        self.calibration = kwargs.get("calibration")

        # Set defaults ###############

        if (self.n_states is None):
            self.n_states = 4 if self.weights is None else len(self.weights)

        if (self.trotter_steps is None):
            self.trotter_steps = 1
        if (self.share_spin is None):
            self.share_spin = True
        if (self.include_singles is None):
            self.include_singles = True
        if (self.include_doubles is None):
            self.include_doubles = True
        if (self.compile_method is None):
            self.compile_method = "auto"
        if (self.gradient_method is None):
            self.gradient_method = "adjoint"

        if (self.optimizer is None):
            self.optimizer = "adam"
        if (self.max_iterations is None):
            self.max_iterations = 4000
        if (self.convergence_threshold is None):
            self.convergence_threshold = 1.0e-9
        if (self.convergence_window is None):
            self.convergence_window = 10
        if (self.adam_lr is None):
            self.adam_lr = 0.05
        if (self.adam_beta1 is None):
            self.adam_beta1 = 0.9
        if (self.adam_beta2 is None):
            self.adam_beta2 = 0.999
        if (self.adam_eps is None):
            self.adam_eps = 1.0e-8
        if (self.spsa_a is None):
            self.spsa_a = 0.2
        if (self.spsa_c is None):
            self.spsa_c = 0.1
        if (self.spsa_big_a is None):
            self.spsa_big_a = 50.0
        if (self.spsa_alpha is None):
            self.spsa_alpha = 0.602
        if (self.spsa_gamma is None):
            self.spsa_gamma = 0.101

        if (self.shots is None):
            self.shots = 10000
        if (self.seed is None):
            self.seed = 0
        if (self.jobs is None):
            self.jobs = 1

        self.validate()

    def validate(self):
        if self.n_states < 1:
            raise ConfigError("NStates must be at least 1, got %r" % self.n_states)
        if self.weights is not None and len(self.weights) != self.n_states:
            raise ConfigError("%d weights for NStates = %d" % (len(self.weights), self.n_states))
        if self.references is not None and len(self.references) != self.n_states:
            raise ConfigError("%d references for NStates = %d" % (len(self.references), self.n_states))
        if not self.convergence_threshold > 0:
            raise ConfigError("ConvergenceThreshold must be positive")
        if self.convergence_window < 1:
            raise ConfigError("ConvergenceWindow must be at least 1")
        if self.max_iterations < 1:
            raise ConfigError("MaxIterations must be at least 1")
        if self.trotter_steps < 1:
            raise ConfigError("TrotterSteps must be at least 1")
        if self.shots < 0:
            raise ConfigError("Shots must be >= 0 (0 means exact expectations)")
        if self.jobs < 1:
            raise ConfigError("Jobs must be at least 1")
        if self.optimizer not in ("adam", "spsa"):
            raise ConfigError("Optimizer must be adam or spsa, got '%s'" % self.optimizer)
        if self.compile_method not in ("auto", "ladder", "gadget"):
            raise ConfigError("CompileMethod must be auto, ladder or gadget")
        if self.gradient_method not in ("adjoint", "parameter_shift"):
            raise ConfigError("GradientMethod must be adjoint or parameter_shift")
        if self.excitations is not None and len(self.excitations) == 0:
            raise ConfigError("Excitations, when given, must not be empty")

    def copy(self, **overrides):
        values = dict(self.__dict__)
        values.update(overrides)
        return QpvqeConfig(**values)

    def _format(self, attr):
        value = getattr(self, attr)
        if attr in _BOOLEANS:
            return "1" if value else "0"
        if attr in _FLOAT_LISTS:
            return ",".join("%.17g" % v for v in value)
        if attr == "references":
            return ",".join("".join(str(int(b)) for b in det) if not isinstance(det, str) else det
                            for det in value)
        if attr == "excitations":
            return ",".join("-".join(str(i) for i in indices) for indices in value)
        if isinstance(value, float):
            return "%.17g" % value
        return "%s" % value

    def write(self, filename):

        with open(filename, "w") as f:
            for title, names in _sections:
                f.write("\n%%----  %s\n" % title)
                for paramname in names:
                    attr = parameters_basic[paramname]
                    f.write("%s\t%s\n" % (paramname.ljust(24), self._format(attr)))

            # Optional parameters
            f.write("\n%----  Other options\n")
            for paramname in parameters_other:
                attr = parameters_other[paramname]
                if getattr(self, attr, None) is not None:
                    f.write("%s\t%s\n" % (paramname.ljust(24), self._format(attr)))

    @classmethod
    def read(cls, filename):
        '''
        Read a plain text parameter file and return the configuration it
        describes; parameters not present take their defaults.
        '''
        values = {}
        with open(filename) as f:
            for number, line in enumerate(f, 1):
                if line.startswith('%') or line.startswith('#'):
                    continue
                if not line.strip():
                    continue
                fields = line.split(None, 1)
                paramname = fields[0]
                paramval = fields[1].strip() if len(fields) > 1 else ""
                if paramname in parameters_basic:
                    attr = parameters_basic[paramname]
                elif paramname in parameters_other:
                    attr = parameters_other[paramname]
                else:
                    raise ConfigError("%s line %d: unknown parameter '%s'" % (filename, number, paramname))
                try:
                    values[attr] = _convert(attr, paramval)
                except ValueError as err:
                    raise ConfigError("%s line %d: bad value for %s: %s" % (filename, number, paramname, err))
        logger.debug("read %d parameters from %s", len(values), filename)
        return cls(**values)

    def __repr__(self):
        return "QpvqeConfig(K=%d, optimizer=%s, seed=%d)" % (self.n_states, self.optimizer, self.seed)


def _convert(attr, text):
    if text in ("None", ""):
        return None
    if attr in _INTEGERS:
        return int(text)
    if attr in _FLOATS:
        return float(text)
    if attr in _BOOLEANS:
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError("expected 0/1, got '%s'" % text)
    if attr in _FLOAT_LISTS:
        return [float(v) for v in text.split(",") if v.strip()]
    if attr == "references":
        return [v.strip() for v in text.split(",") if v.strip()]
    if attr == "excitations":
        return [tuple(int(i) for i in chunk.split("-")) for chunk in text.split(",") if chunk.strip()]
    return text
