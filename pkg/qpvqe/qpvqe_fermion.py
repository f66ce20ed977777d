#--------------------------------#
# qpvqe_fermion.py
#--------------------------------#
"""
Fermionic ladder terms, the Jordan-Wigner map with interleaved spin
orbitals, and the S_z preserving generalized excitations of the UCCGSD
ansatz.

Interleaved ordering: spatial orbital p with spin alpha sits on qubit 2p,
spin beta on qubit 2p+1.
"""

import itertools
import logging

from .qpvqe_errors import ExcitationError, ModeRangeError
from .qpvqe_pauli import PauliString, PauliSum

logger = logging.getLogger(__name__)

ALPHA = 0
BETA = 1


class SpinOrbitalMap(object):
    """Bijection (spatial orbital, spin) <-> spin-orbital / qubit index."""

    def __init__(self, n_spatial):
        if n_spatial < 1:
            raise ValueError("need at least one spatial orbital")
        self.n_spatial = int(n_spatial)
        self.n_modes = 2 * self.n_spatial

    def qubit(self, spatial, spin):
        if spatial < 0 or spatial >= self.n_spatial:
            raise ModeRangeError("spatial orbital %d outside 0..%d" % (spatial, self.n_spatial - 1))
        return 2 * spatial + spin

    def spatial(self, mode):
        return mode // 2

    def spin(self, mode):
        return mode % 2

    def sz(self, mode):
        return 0.5 if mode % 2 == ALPHA else -0.5


class FermionTerm(object):
    """coefficient * product of ladder operators, applied right to left."""

    def __init__(self, coefficient, ladder):
        self.coefficient = complex(coefficient)
        self.ladder = tuple((int(mode), bool(dagger)) for mode, dagger in ladder)

    def adjoint(self):
        return FermionTerm(self.coefficient.conjugate(),
                           [(mode, not dagger) for mode, dagger in reversed(self.ladder)])

    def max_mode(self):
        return max([mode for mode, _ in self.ladder] or [-1])

    def __repr__(self):
        ops = " ".join("a%d%s" % (mode, "^" if dagger else "") for mode, dagger in self.ladder)
        return "FermionTerm(%s, %s)" % (self.coefficient, ops)


def creation(mode, coefficient=1.0):
    return FermionTerm(coefficient, [(mode, True)])


def annihilation(mode, coefficient=1.0):
    return FermionTerm(coefficient, [(mode, False)])


def _ladder_operator(mode, dagger, n_modes):
    parity = [(k, "Z") for k in range(mode)]
    x_part = PauliString(n_modes, parity + [(mode, "X")])
    y_part = PauliString(n_modes, parity + [(mode, "Y")])
    sign = -1j if dagger else 1j
    return PauliSum(n_modes, [(0.5, x_part), (0.5 * sign, y_part)])


def jordan_wigner(term, n_modes):
    """
    Qubit form of a FermionTerm or of a list of them (summed).

    a_p^dagger -> Z_0 ... Z_{p-1} (X_p - i Y_p)/2,
    a_p        -> Z_0 ... Z_{p-1} (X_p + i Y_p)/2.
    """
    if isinstance(term, (list, tuple)):
        total = PauliSum(n_modes)
        for item in term:
            total = total + jordan_wigner(item, n_modes)
        return total
    if term.max_mode() >= n_modes or any(mode < 0 for mode, _ in term.ladder):
        raise ModeRangeError("term %r outside %d modes" % (term, n_modes))
    result = PauliSum.identity(n_modes, term.coefficient)
    for mode, dagger in term.ladder:
        result = result * _ladder_operator(mode, dagger, n_modes)
    return result


def number_operator(n_modes, modes=None):
    if modes is None:
        modes = range(n_modes)
    terms = []
    for mode in modes:
        terms.append((0.5, PauliString(n_modes)))
        terms.append((-0.5, PauliString(n_modes, [(mode, "Z")])))
    return PauliSum(n_modes, terms)


def sz_operator(n_spatial):
    """S_z = 1/2 sum_p (n_p,alpha - n_p,beta), i.e. -1/4 sum_p (Z_2p - Z_2p+1)."""
    n_modes = 2 * n_spatial
    terms = []
    for p in range(n_spatial):
        terms.append((-0.25, PauliString(n_modes, [(2 * p, "Z")])))
        terms.append((0.25, PauliString(n_modes, [(2 * p + 1, "Z")])))
    return PauliSum(n_modes, terms)


class ExcitationGenerator(object):
    """
    One anti-Hermitian generator G - G^dagger with its Pauli form, computed
    once. Generators of the alpha and beta copies of one spatial single
    excitation may share a parameter_index.
    """

    def __init__(self, kind, indices, parameter_index, n_modes):
        if kind not in ("single", "double"):
            raise ExcitationError("unknown excitation kind '%s'" % kind)
        self.kind = kind
        self.indices = tuple(int(i) for i in indices)
        self.parameter_index = int(parameter_index)
        self.n_modes = int(n_modes)
        if any(i < 0 or i >= n_modes for i in self.indices):
            raise ModeRangeError("excitation %r outside %d modes" % (self.indices, n_modes))
        term = self.fermion_term()
        form = jordan_wigner(term, n_modes) - jordan_wigner(term.adjoint(), n_modes)
        self.pauli_form = form

    def fermion_term(self):
        if self.kind == "single":
            p, q = self.indices
            return FermionTerm(1.0, [(p, True), (q, False)])
        p, q, r, s = self.indices
        return FermionTerm(1.0, [(p, True), (q, True), (r, False), (s, False)])

    def sz_change(self):
        if self.kind == "single":
            p, q = self.indices
            return _sz(p) - _sz(q)
        p, q, r, s = self.indices
        return _sz(p) + _sz(q) - _sz(r) - _sz(s)

    def __repr__(self):
        return "ExcitationGenerator(%s%r, theta[%d])" % (self.kind, self.indices, self.parameter_index)


def _sz(mode):
    return 0.5 if mode % 2 == ALPHA else -0.5


def _single_allowed(p, q):
    return p < q and p % 2 == q % 2


def _double_allowed(p, q, r, s):
    if not (p < q and r < s and (p, q) < (r, s)):
        return False
    return (p % 2) + (q % 2) == (r % 2) + (s % 2)


def enumerate_sz_excitations(n_spatial, include_singles=True, include_doubles=True,
                             mode="full", excitations=None, share_spin=True):
    """
    Generalized S_z preserving excitations on 2*n_spatial spin orbitals.

    full mode: every single a_p^dagger a_q (p < q, equal spin) and every
    double a_p^dagger a_q^dagger a_r a_s (p < q, r < s, (p, q) < (r, s),
    zero net S_z), singles first, then doubles in ascending index order.
    With share_spin the alpha and beta copies of a spatial single share one
    parameter.

    effective mode: exactly the caller's list of 2-tuples (singles) and
    4-tuples (doubles), each with its own parameter, in the given order.
    """
    if n_spatial < 1:
        raise ExcitationError("need at least one spatial orbital")
    n_modes = 2 * n_spatial
    generators = []
    if mode == "effective":
        if not excitations:
            raise ExcitationError("effective mode needs a nonempty excitation list")
        for parameter_index, indices in enumerate(excitations):
            indices = tuple(int(i) for i in indices)
            if len(indices) == 2:
                if not _single_allowed(*indices):
                    raise ExcitationError("single %r must have p < q and equal spin" % (indices,))
                generators.append(ExcitationGenerator("single", indices, parameter_index, n_modes))
            elif len(indices) == 4:
                if not _double_allowed(*indices):
                    raise ExcitationError("double %r is not canonical or changes S_z" % (indices,))
                generators.append(ExcitationGenerator("double", indices, parameter_index, n_modes))
            else:
                raise ExcitationError("excitation %r must list 2 or 4 spin orbitals" % (indices,))
        return generators
    if mode != "full":
        raise ExcitationError("unknown excitation mode '%s'" % mode)

    parameter_index = 0
    if include_singles:
        for big_p, big_q in itertools.combinations(range(n_spatial), 2):
            for spin in (ALPHA, BETA):
                indices = (2 * big_p + spin, 2 * big_q + spin)
                generators.append(ExcitationGenerator("single", indices, parameter_index, n_modes))
                if not share_spin:
                    parameter_index += 1
            if share_spin:
                parameter_index += 1
    if include_doubles:
        pairs = list(itertools.combinations(range(n_modes), 2))
        for (p, q), (r, s) in itertools.combinations(pairs, 2):
            if not _double_allowed(p, q, r, s):
                continue
            generator = ExcitationGenerator("double", (p, q, r, s), parameter_index, n_modes)
            if generator.pauli_form.is_empty():
                continue
            generators.append(generator)
            parameter_index += 1
    logger.debug("enumerated %d generators on %d spatial orbitals", len(generators), n_spatial)
    return generators


def parameter_count(generators):
    return 1 + max(g.parameter_index for g in generators) if generators else 0


def parse_excitation_list(text):
    """'0-1-2-3,0-3-1-2' -> [(0, 1, 2, 3), (0, 3, 1, 2)]."""
    excitations = []
    for chunk in text.replace(";", ",").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            excitations.append(tuple(int(i) for i in chunk.split("-")))
        except ValueError:
            raise ExcitationError("malformed excitation '%s'" % chunk)
    return excitations


def format_excitation_list(excitations):
    return ",".join("-".join(str(i) for i in indices) for indices in excitations)
