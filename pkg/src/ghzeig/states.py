"""Dense state vectors, GHZ-type constructors and partial traces.

Basis ordering: qubit 1 is the most significant bit of the amplitude index,
so ``|b_1 b_2 ... b_n>`` sits at index ``int("b_1...b_n", 2)``.

n = 1 and n = 2 are accepted everywhere.  For n = 1 the "GHZ" states are just
|+> and |->; they are useful as oracle cases but carry no entanglement.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, PreconditionError, SizeError
from .pauli import MAX_QUBITS

MultiIndex = tuple[int, ...]

_SQRT_HALF = 1 / math.sqrt(2)


def sign_value(sign) -> int:
    """Normalize '+', '-', +1, -1 to +1 / -1."""
    if sign in ("+", 1, 1.0, True):
        return 1
    if sign in ("-", -1, -1.0):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def multi_index(indices: Iterable[int], n: int) -> MultiIndex:
    """Validate a strictly increasing tuple of 1-based qubit positions."""
    idx = tuple(int(i) for i in indices)
    for a, b in zip(idx, idx[1:]):
        if not a < b:
            raise PreconditionError(f"multi-index {idx} is not strictly increasing")
    if idx and not (1 <= idx[0] and idx[-1] <= n):
        raise PreconditionError(f"multi-index {idx} has entries outside 1..{n}")
    return idx


def complement(indices: Sequence[int], n: int) -> MultiIndex:
    s = set(indices)
    return tuple(i for i in range(1, n + 1) if i not in s)


def index_mask(indices: Iterable[int], n: int) -> int:
    """Integer with the amplitude-index bits of the given qubits set."""
    m = 0
    for i in indices:
        m |= 1 << (n - i)
    return m


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise SizeError(f"qubit count {self.n} outside 1..{MAX_QUBITS}")
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise DimensionError(f"expected {1 << self.n} amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, norm={self.norm():.6g})"


def basis_state(n: int, bits: str | int) -> StateVector:
    idx = int(bits, 2) if isinstance(bits, str) else int(bits)
    amps = np.zeros(1 << n, dtype=complex)
    amps[idx] = 1
    return StateVector(n, amps)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"qubit count {n} outside 1..{MAX_QUBITS}")


def ghz(n: int, sign="+") -> StateVector:
    """(|0...0> +/- |1...1>) / sqrt(2)."""
    return gtilde(n, (), sign)


def gtilde(n: int, indices: Iterable[int], sign="+") -> StateVector:
    """GHZ-like state with the spins at ``indices`` reversed in both branches.

    First branch has 1s exactly at ``indices``; the second branch is its
    bitwise complement, weighted by ``sign``.  Empty ``indices`` gives ghz(n).
    """
    _check_n(n)
    idx = multi_index(indices, n)
    s = sign_value(sign)
    first = index_mask(idx, n)
    amps = np.zeros(1 << n, dtype=complex)
    amps[first] += _SQRT_HALF
    amps[first ^ ((1 << n) - 1)] += s * _SQRT_HALF
    return StateVector(n, amps)


def _check_pair(a: StateVector, b: StateVector) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_pair(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    subset: MultiIndex
    entries: np.ndarray

    @property
    def k(self) -> int:
        return len(self.subset)


def reduced_density_matrix(psi: StateVector, subset: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not in ``subset``; kept qubits retain their order."""
    keep = multi_index(subset, psi.n)
    if not keep or len(keep) == psi.n:
        raise PreconditionError("subset must be a nonempty proper subset of the qubits")
    traced = complement(keep, psi.n)
    tensor = psi.amplitudes.reshape((2,) * psi.n)
    axes = [i - 1 for i in keep] + [i - 1 for i in traced]
    mat = np.transpose(tensor, axes).reshape(1 << len(keep), -1)
    rho = mat @ mat.conj().T
    rho.flags.writeable = False
    return DensityMatrix(keep, rho)


class GeneralizedGhz(NamedTuple):
    bits: str
    phase: float


def detect_generalized_ghz(psi: StateVector, tol: float = 1e-8) -> GeneralizedGhz | None:
    """Recognize (|s> + e^{i phi}|s_bar>)/sqrt(2) up to a global phase.

    ``s`` is reported with qubit 1 in state 0; the global phase is fixed by
    making the amplitude at ``s`` real positive, and phi lies in (-pi, pi].
    """
    amps = psi.amplitudes
    full = psi.dim - 1
    order = np.argsort(-np.abs(amps), kind="stable")
    top = int(order[0])
    s = min(top, top ^ full)
    sbar = s ^ full
    a_s, a_sbar = amps[s], amps[sbar]
    if abs(abs(a_s) - _SQRT_HALF) > tol or abs(abs(a_sbar) - _SQRT_HALF) > tol:
        return None
    rest = np.abs(amps).copy()
    rest[[s, sbar]] = 0
    if rest.max(initial=0.0) > tol:
        return None
    phi = float(np.angle(a_sbar / a_s))
    if phi <= -math.pi + tol:
        phi = math.pi
    if abs(phi) < tol:
        phi = 0.0
    return GeneralizedGhz(format(s, f"0{psi.n}b"), phi)


_BASIS_CHANGE = {
    "Z": np.eye(2, dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) * _SQRT_HALF,
}
LOCAL_SEARCH_MAX_QUBITS = 6


class LocalGhz(NamedTuple):
    bases: str  # per-qubit Pauli eigenbasis, e.g. "ZXXZ"
    bits: str  # in that basis: 0 = +1 eigenvector of the Pauli
    phase: float


def to_local_basis(psi: StateVector, bases: str) -> StateVector:
    """Amplitudes of ``psi`` in the product of the given Pauli eigenbases."""
    t = psi.amplitudes.reshape((2,) * psi.n)
    for q, c in enumerate(bases):
        if c != "Z":
            t = np.moveaxis(np.tensordot(_BASIS_CHANGE[c].conj().T, t, axes=([1], [q])), 0, q)
    return StateVector(psi.n, t.reshape(-1))


def _single_qubit_marginals_mixed(psi: StateVector, tol: float) -> bool:
    for q in range(1, psi.n + 1):
        rho = reduced_density_matrix(psi, (q,)).entries
        if np.abs(rho - 0.5 * np.eye(2)).max() > tol:
            return False
    return True


def detect_local_ghz(psi: StateVector, tol: float = 1e-8) -> LocalGhz | None:
    """Search products of X/Y/Z eigenbases for a generalized-GHZ form.

    Combinations are tried with the fewest non-Z bases first, so a state
    already in computational-basis GHZ form is reported with bases "Z...Z".
    Limited to n <= 6 (3^n combinations).
    """
    if psi.n > LOCAL_SEARCH_MAX_QUBITS:
        raise SizeError(f"local-basis search is limited to n <= {LOCAL_SEARCH_MAX_QUBITS}")
    if psi.n >= 2 and not _single_qubit_marginals_mixed(psi, max(tol, 1e-10) * 10):
        return None
    combos = sorted(itertools.product("ZXY", repeat=psi.n), key=lambda c: sum(x != "Z" for x in c))
    for combo in combos:
        bases = "".join(combo)
        hit = detect_generalized_ghz(to_local_basis(psi, bases), tol)
        if hit is not None:
            return LocalGhz(bases, hit.bits, hit.phase)
    return None
