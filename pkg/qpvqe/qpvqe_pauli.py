#--------------------------------#
# qpvqe_pauli.py
#--------------------------------#
"""
Pauli strings and real/complex weighted sums of them.

Bit ordering: qubit 0 is the most significant bit of a computational basis
index, so the bitstring |1100> has qubit 0 and qubit 1 set and index 12.
"""

import logging
from functools import lru_cache

import numpy as np

from .qpvqe_errors import (DimensionMismatchError, HermiticityError,
                           NormalizationError, QubitRangeError,
                           ResourceGuardError)

logger = logging.getLogger(__name__)

# powers of i, indexed by a 2-bit counter
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)
PRUNE_TOL = 1.0e-12
MATRIX_QUBIT_GUARD = 14
LETTERS = ("X", "Y", "Z")
# single-qubit products a*b = i^k c, keyed by (a, b) -> (k, c)
_SINGLE_PRODUCTS = {
    ("X", "X"): (0, None), ("Y", "Y"): (0, None), ("Z", "Z"): (0, None),
    ("X", "Y"): (1, "Z"), ("Y", "Z"): (1, "X"), ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"), ("Z", "Y"): (3, "X"), ("X", "Z"): (3, "Y"),
}


class PauliString(object):
    """
    Tensor product of single-qubit Pauli letters on n_qubits, identity on
    every qubit not listed.
    """

    __slots__ = ("n_qubits", "letters", "_hash")

    def __init__(self, n_qubits, letters=None):
        if n_qubits < 1:
            raise DimensionMismatchError("a Pauli string needs at least one qubit")
        if letters is None:
            letters = {}
        items = letters.items() if isinstance(letters, dict) else letters
        canonical = {}
        for qubit, letter in items:
            qubit = int(qubit)
            letter = str(letter).upper()
            if letter == "I":
                continue
            if letter not in LETTERS:
                raise ValueError("unknown Pauli letter '%s'" % letter)
            if qubit < 0 or qubit >= n_qubits:
                raise QubitRangeError("qubit %d outside a %d-qubit register" % (qubit, n_qubits))
            if qubit in canonical:
                raise ValueError("qubit %d listed twice" % qubit)
            canonical[qubit] = letter
        self.n_qubits = int(n_qubits)
        self.letters = tuple(sorted(canonical.items()))
        self._hash = hash((self.n_qubits, self.letters))

    @classmethod
    def identity(cls, n_qubits):
        return cls(n_qubits)

    @classmethod
    def from_label(cls, n_qubits, label):
        """Build from a word such as 'X0 Z3 Y5' or the literal 'I'."""
        label = label.strip()
        if label in ("", "I"):
            return cls(n_qubits)
        letters = []
        for factor in label.split():
            letter, index = factor[0], factor[1:]
            if not index.isdigit():
                raise ValueError("malformed Pauli factor '%s'" % factor)
            letters.append((int(index), letter))
        return cls(n_qubits, letters)

    def label(self):
        if not self.letters:
            return "I"
        return " ".join("%s%d" % (letter, qubit) for qubit, letter in self.letters)

    def as_dict(self):
        return dict(self.letters)

    @property
    def support(self):
        return tuple(qubit for qubit, _ in self.letters)

    @property
    def weight(self):
        return len(self.letters)

    def is_identity(self):
        return not self.letters

    def masks(self):
        """(x_mask, z_mask, number of Y letters) over basis-index bits."""
        x_mask = z_mask = 0
        n_y = 0
        for qubit, letter in self.letters:
            bit = 1 << (self.n_qubits - 1 - qubit)
            if letter in ("X", "Y"):
                x_mask |= bit
            if letter in ("Z", "Y"):
                z_mask |= bit
            if letter == "Y":
                n_y += 1
        return x_mask, z_mask, n_y

    def extend(self, n_qubits):
        if n_qubits < self.n_qubits:
            raise DimensionMismatchError("cannot shrink a %d-qubit string to %d qubits" % (self.n_qubits, n_qubits))
        return PauliString(n_qubits, self.letters)

    def tensor(self, other):
        """Place other on the qubits following this string's register."""
        shifted = [(qubit + self.n_qubits, letter) for qubit, letter in other.letters]
        return PauliString(self.n_qubits + other.n_qubits, list(self.letters) + shifted)

    def commutes_with(self, other):
        _check_same_size(self, other)
        mine = dict(self.letters)
        clashes = sum(1 for qubit, letter in other.letters
                      if qubit in mine and mine[qubit] != letter)
        return clashes % 2 == 0

    def sort_key(self):
        return (len(self.letters), self.support, tuple(letter for _, letter in self.letters))

    def __eq__(self, other):
        return (isinstance(other, PauliString) and self.n_qubits == other.n_qubits
                and self.letters == other.letters)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return "PauliString(%d, '%s')" % (self.n_qubits, self.label())


def _check_same_size(a, b):
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError("operands act on %d and %d qubits" % (a.n_qubits, b.n_qubits))


def multiply(a, b):
    """
    Product of two Pauli strings.

    Returns (phase, product) with phase one of 1, i, -1, -i, accumulated as
    an integer power of i.
    """
    _check_same_size(a, b)
    power = 0
    letters = dict(a.letters)
    for qubit, letter in b.letters:
        if qubit not in letters:
            letters[qubit] = letter
            continue
        k, result = _SINGLE_PRODUCTS[(letters[qubit], letter)]
        power = (power + k) % 4
        if result is None:
            del letters[qubit]
        else:
            letters[qubit] = result
    return PHASES[power], PauliString(a.n_qubits, letters)


@lru_cache(maxsize=4096)
def _action(n_qubits, x_mask, z_mask, n_y):
    """
    Permutation and phase vectors with (P psi)[k] = phase[k] * psi[perm[k]].
    """
    indices = np.arange(1 << n_qubits, dtype=np.int64)
    perm = indices ^ x_mask
    parity = np.zeros(indices.shape, dtype=np.int64)
    source = perm & z_mask
    while z_mask:
        parity ^= source & 1
        source = source >> 1
        z_mask >>= 1
    phase = PHASES[n_y % 4] * (1 - 2 * parity).astype(complex)
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def pauli_action(string):
    x_mask, z_mask, n_y = string.masks()
    return _action(string.n_qubits, x_mask, z_mask, n_y)


def apply_string(string, amplitudes):
    """P applied to amplitudes whose leading axis spans string's register."""
    perm, phase = pauli_action(string)
    amplitudes = np.asarray(amplitudes)
    extra = (1,) * (amplitudes.ndim - 1)
    return phase.reshape((-1,) + extra) * amplitudes[perm]


class PauliSum(object):
    """
    Weighted sum of Pauli strings on n_qubits.

    Values are immutable once built: like strings are collected and terms
    with |coefficient| below 1e-12 are dropped.
    """

    def __init__(self, n_qubits, terms=None):
        self.n_qubits = int(n_qubits)
        collected = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for first, second in items:
                if isinstance(first, PauliString):
                    string, coefficient = first, second
                else:
                    coefficient, string = first, second
                if isinstance(string, str):
                    string = PauliString.from_label(self.n_qubits, string)
                if string.n_qubits != self.n_qubits:
                    raise DimensionMismatchError("term on %d qubits in a %d-qubit sum" % (string.n_qubits, self.n_qubits))
                coefficient = complex(coefficient)
                if not np.isfinite(coefficient):
                    raise ValueError("non-finite coefficient for %s" % string.label())
                collected[string] = collected.get(string, 0j) + coefficient
        self._terms = dict((s, c) for s, c in collected.items() if abs(c) > PRUNE_TOL)
        self._grouped = None

    @classmethod
    def from_string(cls, string, coefficient=1.0):
        return cls(string.n_qubits, [(coefficient, string)])

    @classmethod
    def from_labels(cls, n_qubits, pairs):
        """pairs: iterable of (coefficient, 'X0 Y1') tuples."""
        return cls(n_qubits, [(c, PauliString.from_label(n_qubits, w)) for c, w in pairs])

    @classmethod
    def identity(cls, n_qubits, coefficient=1.0):
        return cls(n_qubits, [(coefficient, PauliString(n_qubits))])

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def strings(self):
        return [string for string, _ in self.items()]

    def coefficient(self, string):
        if isinstance(string, str):
            string = PauliString.from_label(self.n_qubits, string)
        return self._terms.get(string, 0j)

    @property
    def constant(self):
        return self._terms.get(PauliString(self.n_qubits), 0j)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def is_empty(self):
        return not self._terms

    def is_hermitian(self, tol=PRUNE_TOL):
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def real(self):
        """Copy with imaginary parts discarded; caller has checked Hermiticity."""
        return PauliSum(self.n_qubits, [(c.real, s) for s, c in self._terms.items()])

    def adjoint(self):
        return PauliSum(self.n_qubits, [(c.conjugate(), s) for s, c in self._terms.items()])

    def extend(self, n_qubits):
        return PauliSum(n_qubits, [(c, s.extend(n_qubits)) for s, c in self._terms.items()])

    def tensor(self, other):
        """self on the leading qubits, other on the qubits that follow."""
        terms = []
        for s1, c1 in self._terms.items():
            for s2, c2 in other._terms.items():
                terms.append((c1 * c2, s1.tensor(s2)))
        return PauliSum(self.n_qubits + other.n_qubits, terms)

    def __add__(self, other):
        return add_simplify(self, other)

    def __sub__(self, other):
        return add_simplify(self, -1.0 * other)

    def __neg__(self):
        return -1.0 * self

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            _check_same_size(self, other)
            terms = []
            for s1, c1 in self._terms.items():
                for s2, c2 in other._terms.items():
                    phase, product = multiply(s1, s2)
                    terms.append((phase * c1 * c2, product))
            return PauliSum(self.n_qubits, terms)
        if isinstance(other, PauliString):
            return self * PauliSum.from_string(other)
        scalar = complex(other)
        return PauliSum(self.n_qubits, [(scalar * c, s) for s, c in self._terms.items()])

    def __rmul__(self, other):
        if isinstance(other, PauliString):
            return PauliSum.from_string(other) * self
        return self.__mul__(other)

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def equals(self, other, tol=1.0e-12):
        if self.n_qubits != other.n_qubits:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= tol for k in keys)

    def __eq__(self, other):
        return isinstance(other, PauliSum) and self.n_qubits == other.n_qubits \
            and self._terms == other._terms

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        shown = " + ".join("(%s)*%s" % (c, s.label()) for s, c in self.items()[:6])
        if len(self) > 6:
            shown += " + ..."
        return "PauliSum(%d, %s)" % (self.n_qubits, shown or "0")

    def _grouped_action(self):
        # terms sharing an x mask share a permutation; fold their phases
        if self._grouped is None:
            grouped = {}
            for string, coefficient in self._terms.items():
                x_mask, z_mask, n_y = string.masks()
                perm, phase = _action(self.n_qubits, x_mask, z_mask, n_y)
                if x_mask in grouped:
                    grouped[x_mask] = (perm, grouped[x_mask][1] + coefficient * phase)
                else:
                    grouped[x_mask] = (perm, coefficient * phase)
            self._grouped = [grouped[x] for x in sorted(grouped)]
        return self._grouped

    def apply(self, amplitudes):
        """
        H applied to an amplitude array of a register of at least n_qubits;
        H acts on the leading (lowest-indexed) qubits.
        """
        amplitudes = np.asarray(amplitudes)
        total = amplitudes.shape[0]
        dim = 1 << self.n_qubits
        if total % dim != 0 or total < dim:
            raise DimensionMismatchError("%d amplitudes cannot host a %d-qubit operator" % (total, self.n_qubits))
        block = amplitudes.reshape((dim, total // dim) + amplitudes.shape[1:])
        out = np.zeros(block.shape, dtype=complex)
        extra = (1,) * (block.ndim - 1)
        for perm, diagonal in self._grouped_action():
            out += diagonal.reshape((-1,) + extra) * block[perm]
        return out.reshape(amplitudes.shape)


def add_simplify(a, b):
    _check_same_size(a, b)
    terms = list(a._terms.items()) + list(b._terms.items())
    return PauliSum(a.n_qubits, terms)


def _amplitudes_of(psi):
    return np.asarray(getattr(psi, "amplitudes", psi))


def expectation(h, psi):
    """
    <psi| H (x) 1 |psi> in Hartree, with H acting on the lowest-indexed
    qubits of psi.
    """
    if not h.is_hermitian():
        raise HermiticityError("expectation needs a Hermitian operator")
    amplitudes = _amplitudes_of(psi)
    norm = np.vdot(amplitudes, amplitudes).real
    if abs(norm - 1.0) > 1.0e-9:
        raise NormalizationError("state norm^2 %.3e deviates from 1" % norm)
    value = np.vdot(amplitudes, h.apply(amplitudes))
    if abs(value.imag) > 1.0e-10:
        raise HermiticityError("imaginary residue %.3e in expectation value" % value.imag)
    return float(value.real)


def to_matrix(h):
    """Dense 2^n x 2^n matrix, qubit 0 the most significant bit."""
    if h.n_qubits > MATRIX_QUBIT_GUARD:
        raise ResourceGuardError("to_matrix limited to %d qubits, got %d" % (MATRIX_QUBIT_GUARD, h.n_qubits))
    dim = 1 << h.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    for perm, diagonal in h._grouped_action():
        matrix[rows, perm] += diagonal
    return matrix


def single(n_qubits, qubit, letter, coefficient=1.0):
    """Convenience: one-term sum coefficient * letter on qubit."""
    return PauliSum(n_qubits, [(coefficient, PauliString(n_qubits, [(qubit, letter)]))])
