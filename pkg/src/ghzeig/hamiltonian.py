"""Few-body Hamiltonians as real-weighted sums of Pauli strings."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, HamiltonianFormatError, PreconditionError, SizeError
from .pauli import PauliString, parse
from .states import StateVector

DENSE_MAX_QUBITS = 12


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: PauliString


@dataclass(frozen=True, eq=False)
class FewBodyHamiltonian:
    """Sum of real coefficient times Pauli string, acting on ``n`` qubits.

    Use :meth:`from_terms` to build one; it merges repeated strings, drops
    zero coefficients and sorts terms canonically.  Every term weight must be
    at most ``declared_body_order``, which in turn must be below ``n`` unless
    ``allow_full_body`` is set (reserved for oracle tests).
    """

    n: int
    terms: tuple[PauliTerm, ...]
    declared_body_order: int
    allow_full_body: bool = False

    def __post_init__(self):
        m = self.declared_body_order
        limit = self.n if self.allow_full_body else self.n - 1
        if m < 0 or m > limit:
            raise PreconditionError(
                f"declared body order {m} not allowed for n={self.n} (need m < n)"
            )
        seen = set()
        for t in self.terms:
            if t.string.n != self.n:
                raise DimensionError(f"term {t.string} acts on {t.string.n} qubits, not {self.n}")
            if not math.isfinite(t.coefficient) or t.coefficient == 0:
                raise HamiltonianFormatError(f"term {t.string}: coefficient must be finite and nonzero")
            if t.string.weight > m:
                raise PreconditionError(
                    f"term {t.string}: weight {t.string.weight} exceeds declared body order {m}"
                )
            if t.string in seen:
                raise HamiltonianFormatError(f"duplicate term {t.string}")
            seen.add(t.string)

    @classmethod
    def from_terms(
        cls,
        n: int,
        terms: Iterable[tuple[float, PauliString | str]],
        body_order: int | None = None,
        allow_full_body: bool = False,
    ) -> "FewBodyHamiltonian":
        merged: dict[PauliString, float] = {}
        for coeff, s in terms:
            p = parse(s) if isinstance(s, str) else s
            if p.n != n:
                raise DimensionError(f"term {p} acts on {p.n} qubits, not {n}")
            c = float(coeff)
            if not math.isfinite(c):
                raise HamiltonianFormatError(f"term {p}: non-finite coefficient {coeff!r}")
            merged[p] = merged.get(p, 0.0) + c
        kept = sorted(
            (PauliTerm(c, p) for p, c in merged.items() if c != 0),
            key=lambda t: t.string.sort_key(),
        )
        if body_order is None:
            body_order = max((t.string.weight for t in kept), default=0)
        return cls(n, tuple(kept), int(body_order), allow_full_body)

    def __len__(self) -> int:
        return len(self.terms)

    def coupling_l1(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def coefficient(self, s: PauliString | str) -> float:
        p = parse(s) if isinstance(s, str) else s
        for t in self.terms:
            if t.string == p:
                return t.coefficient
        return 0.0

    def __repr__(self) -> str:
        return f"FewBodyHamiltonian(n={self.n}, terms={len(self.terms)}, m={self.declared_body_order})"


def body_order(H: FewBodyHamiltonian) -> int:
    """Largest weight actually present (0 for an identity-only or empty H)."""
    return max((t.string.weight for t in H.terms), default=0)


def _basis_indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _term_phases(p: PauliString, idx: np.ndarray) -> np.ndarray:
    """i^{#Y} (-1)^{popcount(z & b)} for every basis index b."""
    parity = np.bitwise_count(idx & p.z) & 1
    base = (1, 1j, -1, -1j)[p.y_count % 4]
    return base * (1 - 2 * parity.astype(np.int8))


def apply(H: FewBodyHamiltonian, psi: StateVector) -> StateVector:
    """Matrix-free H|psi>, one permutation-and-phase pass per term."""
    if H.n != psi.n:
        raise DimensionError(f"Hamiltonian on {H.n} qubits, state on {psi.n}")
    idx = _basis_indices(H.n)
    v = psi.amplitudes
    out = np.zeros_like(v)
    for t in H.terms:
        src = idx ^ t.string.x
        # <b|P|b^x> is the phase of P acting on |b^x>
        out += t.coefficient * _term_phases(t.string, src) * v[src]
    return StateVector(H.n, out)


def to_dense(H: FewBodyHamiltonian) -> np.ndarray:
    if H.n > DENSE_MAX_QUBITS:
        raise SizeError(f"dense materialization capped at {DENSE_MAX_QUBITS} qubits, got {H.n}")
    dim = 1 << H.n
    idx = _basis_indices(H.n)
    M = np.zeros((dim, dim), dtype=complex)
    for t in H.terms:
        M[idx ^ t.string.x, idx] += t.coefficient * _term_phases(t.string, idx)
    return M


def _ring_pair(n: int, i: int, letter: str) -> PauliString:
    return PauliString.from_sites(n, {i: letter, i % n + 1: letter})


def ring_xz4(jx: Sequence[float], jz: Sequence[float]) -> FewBodyHamiltonian:
    """Sum_i Jx_i X_i X_{i+1} + Jz_i Z_i Z_{i+1} on a 4-site ring."""
    if len(jx) != 4 or len(jz) != 4:
        raise DimensionError("ring_xz4 needs four x couplings and four z couplings")
    terms = []
    for i in range(1, 5):
        terms.append((jx[i - 1], _ring_pair(4, i, "X")))
        terms.append((jz[i - 1], _ring_pair(4, i, "Z")))
    return FewBodyHamiltonian.from_terms(4, terms, body_order=2)


def ring_xz4_strings() -> list[PauliString]:
    """The eight coupling strings of :func:`ring_xz4`, x-bonds first."""
    return [_ring_pair(4, i, "X") for i in range(1, 5)] + [_ring_pair(4, i, "Z") for i in range(1, 5)]


def symmetric_ring4(jx: float, jz: float) -> FewBodyHamiltonian:
    """ring_xz4 with Jz_i = jz/4 and x couplings (jx, jx, -jx, -jx)/4."""
    q = jx / 4
    return ring_xz4((q, q, -q, -q), (jz / 4,) * 4)


def five_qubit_three_body(jx: float, jz: float) -> FewBodyHamiltonian:
    """(jz/5) Sum Z_i Z_{i+1} + (jx/5) Sum (X_i X_{i+1} X_{i+2} - X_i X_{i+1}), ring of 5."""
    n = 5
    terms = []
    for i in range(1, n + 1):
        j, k = i % n + 1, (i + 1) % n + 1
        terms.append((jz / 5, PauliString.from_sites(n, {i: "Z", j: "Z"})))
        terms.append((jx / 5, PauliString.from_sites(n, {i: "X", j: "X", k: "X"})))
        terms.append((-jx / 5, PauliString.from_sites(n, {i: "X", j: "X"})))
    return FewBodyHamiltonian.from_terms(n, terms, body_order=3)


MODELS = {
    "ring-xz4": ring_xz4,
    "symmetric-ring4": symmetric_ring4,
    "five-qubit-3body": five_qubit_three_body,
}


def generic_family(n: int, m: int) -> list[PauliString]:
    """All non-identity strings of weight <= m, in canonical order.

    There are sum_{k=1..m} C(n, k) 3^k of them.
    """
    if not 1 <= m < n:
        raise PreconditionError(f"need 1 <= m < n, got n={n}, m={m}")
    if n > DENSE_MAX_QUBITS:
        raise SizeError(f"generic family capped at n={DENSE_MAX_QUBITS}")
    out = []
    for k in range(1, m + 1):
        for support in itertools.combinations(range(1, n + 1), k):
            for letters in itertools.product("XYZ", repeat=k):
                out.append(PauliString.from_sites(n, dict(zip(support, letters))))
    return out


def to_json(H: FewBodyHamiltonian) -> dict:
    return {
        "n": H.n,
        "m": H.declared_body_order,
        "terms": [{"coeff": t.coefficient, "string": str(t.string)} for t in H.terms],
    }


def from_json(data: dict, allow_empty: bool = False) -> FewBodyHamiltonian:
    """Validate and build from ``{"n": int, "m": int?, "terms": [...]}``.

    ``m`` is optional; without it the actual body order is used, which must
    still be below ``n``.
    """
    if not isinstance(data, dict) or "n" not in data or "terms" not in data:
        raise HamiltonianFormatError("Hamiltonian JSON needs keys 'n' and 'terms'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise HamiltonianFormatError(f"'n' must be an integer, got {n!r}")
    raw = data["terms"]
    if not isinstance(raw, list):
        raise HamiltonianFormatError("'terms' must be a list")
    if not raw and not allow_empty:
        raise HamiltonianFormatError("empty term list")
    declared = data.get("m")
    terms = []
    for pos, entry in enumerate(raw):
        where = f"term {pos}"
        try:
            label = entry["string"]
            coeff = entry["coeff"]
        except (TypeError, KeyError):
            raise HamiltonianFormatError(f"{where}: needs 'coeff' and 'string'") from None
        where = f"term {pos} ({label!r})"
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise HamiltonianFormatError(f"{where}: coefficient must be a real number")
        try:
            p = parse(label)
        except ValueError as exc:
            raise HamiltonianFormatError(f"{where}: {exc}") from None
        if p.n != n:
            raise HamiltonianFormatError(f"{where}: acts on {p.n} qubits but n={n}")
        if declared is not None and p.weight > declared:
            raise HamiltonianFormatError(
                f"{where}: weight {p.weight} exceeds declared body order {declared}"
            )
        if p.weight >= n:
            raise HamiltonianFormatError(f"{where}: weight {p.weight} is not below n={n}")
        terms.append((coeff, p))
    try:
        return FewBodyHamiltonian.from_terms(n, terms, body_order=declared)
    except ValueError as exc:
        raise HamiltonianFormatError(str(exc)) from None


def load(path: str | Path) -> FewBodyHamiltonian:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise HamiltonianFormatError(f"{path}: invalid JSON ({exc})") from None
    return from_json(data)


def save(H: FewBodyHamiltonian, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json(H), indent=2) + "\n")
