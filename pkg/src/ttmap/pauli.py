"""Exact algebra of signed Pauli strings and complex linear combinations of them.

Strings are kept in symplectic form: two bitmasks (X part, Z part) plus a
power-of-i phase.  Qubit ``q`` of an ``n``-qubit string occupies bit
``n - 1 - q`` of each mask, so qubit 0 is the most significant bit of a
computational-basis index and ket literals like ``|1100>`` read left to
right as qubits 0..3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

PRUNE_THRESHOLD = 1e-12

_PHASES = (1, 1j, -1, -1j)

_TOKEN_RE = re.compile(r"([XYZ])(\d+)")
_HEAD_RE = re.compile(r"^([+-]?)(i?)")


class PauliError(ValueError):
    """Malformed Pauli string or incompatible operands."""


def _bit(n_qubits: int, qubit: int) -> int:
    return 1 << (n_qubits - 1 - qubit)


@dataclass(frozen=True)
class PauliString:
    """A signed tensor product of single-qubit Pauli letters.

    Internally the operator is ``i**phase_pow * X^x Z^z`` (per-qubit
    ``X`` then ``Z``); the letter ``Y`` therefore carries one factor of
    ``i`` in ``phase_pow``.  Instances are immutable and hashable.
    """

    n_qubits: int
    x: int = 0
    z: int = 0
    phase_pow: int = 0

    def __post_init__(self):
        if self.n_qubits < 0:
            raise PauliError("negative qubit count")
        mask = (1 << self.n_qubits) - 1
        object.__setattr__(self, "x", self.x & mask)
        object.__setattr__(self, "z", self.z & mask)
        object.__setattr__(self, "phase_pow", self.phase_pow % 4)

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def from_letter(cls, n_qubits: int, qubit: int, letter: str) -> "PauliString":
        if not 0 <= qubit < n_qubits:
            raise PauliError(f"qubit {qubit} out of range for {n_qubits} qubits")
        b = _bit(n_qubits, qubit)
        if letter == "X":
            return cls(n_qubits, x=b)
        if letter == "Y":
            return cls(n_qubits, x=b, z=b, phase_pow=1)
        if letter == "Z":
            return cls(n_qubits, z=b)
        if letter == "I":
            return cls(n_qubits)
        raise PauliError(f"unknown Pauli letter {letter!r}")

    # -- structure ------------------------------------------------------

    @property
    def phase(self) -> complex:
        """The displayed sign unit: string = phase * (product of letters)."""
        y_count = (self.x & self.z).bit_count()
        return _PHASES[(self.phase_pow - y_count) % 4]

    @property
    def key(self) -> Tuple[int, int]:
        """Phase-free symplectic key, used for PauliSum bucketing."""
        return (self.x, self.z)

    def letter(self, qubit: int) -> str:
        b = _bit(self.n_qubits, qubit)
        xi, zi = bool(self.x & b), bool(self.z & b)
        return "IXZY"[xi + 2 * zi] if not (xi and zi) else "Y"

    def letters(self) -> Iterator[Tuple[int, str]]:
        """Yield (qubit, letter) for each non-identity position."""
        for q in range(self.n_qubits):
            l = self.letter(q)
            if l != "I":
                yield q, l

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return (self.phase_pow - (self.x & self.z).bit_count()) % 2 == 0

    def with_phase(self, unit: complex) -> "PauliString":
        """Replace the displayed phase by the given unit (+1, +i, -1 or -i)."""
        e = _PHASES.index(unit)
        y_count = (self.x & self.z).bit_count()
        return PauliString(self.n_qubits, self.x, self.z, e + y_count)

    # -- algebra --------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            raise PauliError("can only multiply by another PauliString; "
                             "wrap in a PauliSum for scalar coefficients")
        if self.n_qubits != other.n_qubits:
            raise PauliError("qubit count mismatch in product")
        e = self.phase_pow + other.phase_pow + 2 * (self.z & other.x).bit_count()
        return PauliString(self.n_qubits, self.x ^ other.x, self.z ^ other.z, e)

    def adjoint(self) -> "PauliString":
        e = -self.phase_pow + 2 * (self.x & self.z).bit_count()
        return PauliString(self.n_qubits, self.x, self.z, e)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n_qubits != other.n_qubits:
            raise PauliError("qubit count mismatch")
        overlap = (self.x & other.z).bit_count() + (self.z & other.x).bit_count()
        return overlap % 2 == 0

    def __repr__(self) -> str:
        return f"PauliString({format_string(self)!r}, n={self.n_qubits})"


def anticommutator_is_zero(p: PauliString, q: PauliString) -> bool:
    """True iff pq + qp = 0, from the symplectic overlap parity."""
    return not p.commutes_with(q)


def parse_string(text: str, n_qubits: int) -> PauliString:
    """Parse ``[+-][i]([XYZ]<index>)*`` into a PauliString.

    Indices must be unique and below ``n_qubits``; the empty body is the
    identity.
    """
    head = _HEAD_RE.match(text)
    sign, imag = head.groups()
    body = text[head.end():]
    unit = (-1 if sign == "-" else 1) * (1j if imag else 1)
    result = PauliString.identity(n_qubits)
    seen = set()
    pos = 0
    for m in _TOKEN_RE.finditer(body):
        if m.start() != pos:
            raise PauliError(f"malformed Pauli string {text!r}")
        pos = m.end()
        letter, idx = m.group(1), int(m.group(2))
        if idx in seen:
            raise PauliError(f"duplicate qubit index {idx} in {text!r}")
        if idx >= n_qubits:
            raise PauliError(f"qubit index {idx} >= n_qubits={n_qubits}")
        seen.add(idx)
        result = result * PauliString.from_letter(n_qubits, idx, letter)
    if pos != len(body):
        raise PauliError(f"malformed Pauli string {text!r}")
    return result.with_phase(result.phase * unit) if unit != 1 else result


def format_string(p: PauliString) -> str:
    """Inverse of parse_string: sign unit followed by letter-index tokens."""
    head = {1: "", 1j: "i", -1: "-", -1j: "-i"}[p.phase]
    return head + "".join(f"{l}{q}" for q, l in p.letters())


class PauliSum:
    """A complex linear combination of phase-free Pauli strings.

    Terms are held in a dict keyed by the symplectic (x, z) pair; any
    displayed phase of a contributing string is folded into its
    coefficient.  Coefficients below ``prune`` in magnitude are dropped.
    """

    __slots__ = ("n_qubits", "terms", "prune")

    def __init__(self, n_qubits: int, terms=None, prune: float = PRUNE_THRESHOLD):
        self.n_qubits = n_qubits
        self.prune = prune
        self.terms: Dict[Tuple[int, int], complex] = {}
        if terms:
            for string, coeff in terms:
                self.add_string(string, coeff)

    @classmethod
    def from_string(cls, p: PauliString, coeff: complex = 1.0) -> "PauliSum":
        s = cls(p.n_qubits)
        s.add_string(p, coeff)
        return s

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls.from_string(PauliString.identity(n_qubits), coeff)

    def add_string(self, p: PauliString, coeff: complex = 1.0) -> None:
        if p.n_qubits != self.n_qubits:
            raise PauliError("qubit count mismatch")
        c = self.terms.get(p.key, 0.0) + coeff * p.phase
        if abs(c) <= self.prune:
            self.terms.pop(p.key, None)
        else:
            self.terms[p.key] = c

    def _add_key(self, key: Tuple[int, int], coeff: complex) -> None:
        c = self.terms.get(key, 0.0) + coeff
        if abs(c) <= self.prune:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def items(self):
        """Iterate (phase-free PauliString, coefficient) pairs."""
        for (x, z), c in self.terms.items():
            y = (x & z).bit_count()
            yield PauliString(self.n_qubits, x, z, y), c

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise PauliError("qubit count mismatch")
        out = self.copy()
        for key, c in other.terms.items():
            out._add_key(key, c)
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if self.n_qubits != other.n_qubits:
                raise PauliError("qubit count mismatch")
            out = PauliSum(self.n_qubits, prune=self.prune)
            for (x1, z1), c1 in self.terms.items():
                y1 = (x1 & z1).bit_count()
                for (x2, z2), c2 in other.terms.items():
                    y2 = (x2 & z2).bit_count()
                    e = y1 + y2 + 2 * ((z1 & x2).bit_count())
                    x, z = x1 ^ x2, z1 ^ z2
                    y = (x & z).bit_count()
                    out._add_key((x, z), c1 * c2 * _PHASES[(e - y) % 4])
            return out
        out = PauliSum(self.n_qubits, prune=self.prune)
        for key, c in self.terms.items():
            out._add_key(key, c * other)
        return out

    __rmul__ = __mul__

    def copy(self) -> "PauliSum":
        out = PauliSum(self.n_qubits, prune=self.prune)
        out.terms = dict(self.terms)
        return out

    def adjoint(self) -> "PauliSum":
        # phase-free keys are Hermitian strings, so only conjugate coefficients
        out = PauliSum(self.n_qubits, prune=self.prune)
        for key, c in self.terms.items():
            out.terms[key] = c.conjugate() if isinstance(c, complex) else c
        return out

    @property
    def is_hermitian(self) -> bool:
        return all(abs(c.imag) <= max(self.prune, 1e-10) for c in map(complex, self.terms.values()))

    def coefficient(self, p: PauliString) -> complex:
        c = self.terms.get(p.key, 0.0)
        return c / p.phase if c else 0.0

    def is_zero(self) -> bool:
        return not self.terms

    def max_weight(self) -> int:
        return max(((x | z).bit_count() for (x, z) in self.terms), default=0)

    def __repr__(self) -> str:
        parts = [f"({c:.6g})*{format_string(p) or 'I'}" for p, c in self.items()]
        return f"PauliSum[{' + '.join(parts) or '0'}]"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    return a * b - b * a


# -- serialization ------------------------------------------------------

def format_sum(s: PauliSum) -> str:
    """One record per term: ``<string> <real> <imag>``, identity written as
    ``I``; first line carries the qubit count."""
    lines = [f"n_qubits {s.n_qubits}"]
    for p, c in sorted(s.items(), key=lambda t: t[0].key):
        c = complex(c)
        lines.append(f"{format_string(p) or 'I'} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_sum(text: str) -> PauliSum:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n_qubits"):
        raise PauliError("missing n_qubits header")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise PauliError("malformed n_qubits header")
    out = PauliSum(n)
    for ln in lines[1:]:
        fields = ln.split()
        if len(fields) != 3:
            raise PauliError(f"malformed term record {ln!r}")
        body = "" if fields[0] == "I" else fields[0]
        p = parse_string(body, n)
        out.add_string(p, float(fields[1]) + 1j * float(fields[2]))
    return out


def save_sum(s: PauliSum, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_sum(s))


def load_sum(path) -> PauliSum:
    with open(path) as fh:
        return parse_sum(fh.read())
