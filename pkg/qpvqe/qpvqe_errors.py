#--------------------------------#
# qpvqe_errors.py
#--------------------------------#
"""
Exception hierarchy for the qpvqe package.

Every error raised on purpose by the library derives from QpvqeError, so the
command line front end can report it with a single except clause.
"""


class QpvqeError(Exception):
    """Base class of all qpvqe failures."""


class DimensionMismatchError(QpvqeError, ValueError):
    pass


class HermiticityError(QpvqeError, ValueError):
    pass


class NormalizationError(QpvqeError, ValueError):
    pass


class ResourceGuardError(QpvqeError, ValueError):
    """Dense representation requested above the qubit guard."""


class QubitRangeError(QpvqeError, IndexError):
    pass


class ModeRangeError(QpvqeError, IndexError):
    pass


class ExcitationError(QpvqeError, ValueError):
    pass


class InvalidWeightsError(QpvqeError, ValueError):
    pass


class InvalidReferenceSetError(QpvqeError, ValueError):
    pass


class StatePreparationError(QpvqeError, RuntimeError):
    """The purified state program produced the wrong amplitudes."""


class DivergenceError(QpvqeError, FloatingPointError):

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = "%s (iteration %d)" % (message, iteration)
        super(DivergenceError, self).__init__(message)
        self.iteration = iteration


class CertificateError(QpvqeError, ArithmeticError):
    pass


class CalibrationError(QpvqeError, ValueError):
    pass


class HamiltonianParseError(QpvqeError, ValueError):

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = "line %d: %s" % (line_number, message)
        super(HamiltonianParseError, self).__init__(message)
        self.line_number = line_number


class ManifestError(QpvqeError, ValueError):
    pass


class SectorError(QpvqeError, ValueError):
    pass


class ConfigError(QpvqeError, ValueError):
    pass


class ResultFormatError(QpvqeError, ValueError):
    pass
