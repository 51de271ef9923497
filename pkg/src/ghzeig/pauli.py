"""n-qubit Pauli strings in bit-pair form with exact phase tracking.

A string is stored as two integer masks.  Bit ``n - 1 - k`` of a mask refers
to qubit ``k + 1``, so a mask read as a binary number lines up with the
printed label ("XYZI", qubit 1 leftmost) and with the amplitude index of a
dense state vector, where qubit 1 is the most significant bit.

Phase convention (asserted against explicit matrices in the tests)::

    X|b> = |1-b>,   Z|b> = (-1)^b |b>,   Y|b> = i (-1)^b |1-b>

so Y|0> = i|1> and Y|1> = -i|0>.  Equivalently a string with masks (x, z)
is the operator ``i^{|x & z|} X^x Z^z`` with Z applied first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionError, ParseError, SizeError

MAX_QUBITS = 24

_LETTERS = "IXZY"  # index = xbit + 2 * zbit
_PHASE_VALUES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class Phase:
    """A fourth root of unity stored as the exponent k of i^k."""

    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.k + other.k)

    def __neg__(self) -> "Phase":
        return Phase(self.k + 2)

    @property
    def value(self) -> complex:
        return complex(_PHASE_VALUES[self.k])

    def __complex__(self) -> complex:
        return self.value

    def __str__(self) -> str:
        return ("+1", "+i", "-1", "-i")[self.k]


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of I/X/Y/Z on ``n`` qubits.

    ``x`` marks sites carrying X or Y, ``z`` marks sites carrying Z or Y.
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise SizeError(f"qubit count {self.n} outside 1..{MAX_QUBITS}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise SizeError(f"mask bits set beyond qubit {self.n}")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_sites(cls, n: int, letters: dict[int, str]) -> "PauliString":
        """Build from a {1-based site: letter} map; unlisted sites are I."""
        chars = ["I"] * n
        for site, letter in letters.items():
            if not 1 <= site <= n:
                raise DimensionError(f"site {site} outside 1..{n}")
            chars[site - 1] = letter
        return parse("".join(chars))

    def bit(self, site: int) -> int:
        """Mask bit for a 1-based site."""
        return 1 << (self.n - site)

    def letter(self, site: int) -> str:
        b = self.bit(site)
        return _LETTERS[bool(self.x & b) + 2 * bool(self.z & b)]

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    def sites(self, mask: int | None = None) -> tuple[int, ...]:
        """1-based sites whose bit is set in ``mask`` (default: the support)."""
        if mask is None:
            mask = self.x | self.z
        return tuple(s for s in range(1, self.n + 1) if mask & self.bit(s))

    @property
    def is_diagonal(self) -> bool:
        return self.x == 0

    def sort_key(self) -> tuple:
        """Canonical order: weight, then support, then letters (X < Y < Z)."""
        support = self.sites()
        return (self.weight, support, tuple("XYZ".index(self.letter(s)) for s in support))

    def __str__(self) -> str:
        return format_label(self)

    def __repr__(self) -> str:
        return f"PauliString('{format_label(self)}')"


def parse(text: str) -> PauliString:
    """Parse a label such as ``"XYZI"``; the leftmost character is qubit 1."""
    if not text:
        raise ParseError("empty Pauli label")
    if len(text) > MAX_QUBITS:
        raise SizeError(f"label of length {len(text)} exceeds {MAX_QUBITS} qubits")
    n = len(text)
    x = z = 0
    for pos, ch in enumerate(text, start=1):
        code = _LETTERS.find(ch)
        if code < 0:
            raise ParseError(f"invalid Pauli letter {ch!r} at position {pos}")
        b = 1 << (n - pos)
        if code & 1:
            x |= b
        if code & 2:
            z |= b
    return PauliString(n, x, z)


def format_label(p: PauliString) -> str:
    return "".join(p.letter(s) for s in range(1, p.n + 1))


def weight(p: PauliString) -> int:
    return p.weight


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionError(f"qubit counts differ: {p.n} vs {q.n}")


def multiply(p: PauliString, q: PauliString) -> tuple[Phase, PauliString]:
    """Operator product ``p @ q = phase * r``."""
    _check_same_n(p, q)
    r = PauliString(p.n, p.x ^ q.x, p.z ^ q.z)
    # i^a X^x1 Z^z1 . i^b X^x2 Z^z2 = i^(a+b) (-1)^|z1&x2| X^x3 Z^z3
    k = p.y_count + q.y_count - r.y_count + 2 * (p.z & q.x).bit_count()
    return Phase(k), r


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """0 if p and q commute, 1 if they anticommute."""
    _check_same_n(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def apply_to_basis(p: PauliString, bits: str | int) -> tuple[Phase, str | int]:
    """Act with ``p`` on a computational basis state.

    ``bits`` is either a string of '0'/'1' (qubit 1 leftmost) or the integer
    amplitude index.  The output has the same type as the input.
    """
    as_text = isinstance(bits, str)
    if as_text:
        if len(bits) != p.n or set(bits) - {"0", "1"}:
            raise DimensionError(f"basis label {bits!r} is not {p.n} bits")
        idx = int(bits, 2)
    else:
        idx = int(bits)
        if not 0 <= idx < (1 << p.n):
            raise DimensionError(f"basis index {idx} out of range for {p.n} qubits")
    phase = Phase(p.y_count + 2 * (p.z & idx).bit_count())
    out = idx ^ p.x
    return phase, (format(out, f"0{p.n}b") if as_text else out)


_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def to_matrix(p: PauliString) -> np.ndarray:
    """Dense Kronecker-product matrix; only sensible for small n."""
    return reduce(np.kron, [_SINGLE[p.letter(s)] for s in range(1, p.n + 1)])
