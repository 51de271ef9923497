"""Linear conditions on the couplings for |G+> to be an eigenstate.

Every coupling string feeds exactly one bucket of the G+ decomposition with
a weight that is a fourth root of unity (times the canonical-class sign), so
splitting each complex bucket into its real and imaginary part gives an
integer matrix with entries in {-1, 0, 1}.  Its exact nullspace is the set
of coupling vectors for which G+ is an eigenstate.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .ghz_sector import (
    bucket_label,
    canonical_flip_class,
    eigenstate_conditions,
    m_star,
    string_flip_action,
)
from .hamiltonian import (
    FewBodyHamiltonian,
    apply,
    five_qubit_three_body,
    generic_family,
    symmetric_ring4,
)
from .pauli import PauliString
from .spectra import DEFAULT_CLUSTER_TOL, analyze
from .states import ghz

CONSTRAINT_MAX_QUBITS = 10


def string_bucket(p: PauliString) -> tuple[str, int, int]:
    """(bucket label, part, sign) fed by ``p`` in the G+ decomposition.

    ``part`` is 0 for the real row and 1 for the imaginary row; the
    contribution is ``sign * coefficient``.  Even-Z diagonal strings only
    shift epsilon and return ("epsilon", 0, 1).
    """
    S, sigma, phase = string_flip_action(p)
    if not S:
        return ("epsilon", 0, 1) if sigma == 1 else ("b0", 0, 1)
    R, f = canonical_flip_class(S, sigma, p.n)
    k = phase.k  # i^k: 0 -> +1 re, 1 -> +1 im, 2 -> -1 re, 3 -> -1 im
    return bucket_label("a" if sigma == 1 else "b", R), k & 1, f * (1 - (k & 2))


def _row_order(label: str) -> tuple:
    if label == "b0":
        return (0,)
    kind, rest = label[0], label[2:-1]
    R = tuple(int(v) for v in rest.strip("()").split(",") if v)
    return (1, len(R), R, kind)


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    n: int
    m: int
    columns: tuple[PauliString, ...]
    rows: tuple[str, ...]  # e.g. "a[(1,2)].re"
    matrix: np.ndarray  # int8, shape (len(rows), len(columns))

    def bucket_values(self, J: Sequence[float]) -> dict[str, float]:
        vals = self.matrix.astype(float) @ np.asarray(J, dtype=float)
        return dict(zip(self.rows, vals))

    def hamiltonian(self, J: Sequence, body_order: int | None = None) -> FewBodyHamiltonian:
        return FewBodyHamiltonian.from_terms(
            self.n,
            ((float(c), p) for c, p in zip(J, self.columns) if c != 0),
            body_order=self.m if body_order is None else body_order,
        )


def build_constraints(n: int, m: int, strings: Sequence[PauliString] | None = None) -> ConstraintSystem:
    """Constraint matrix over ``generic_family(n, m)``, or over ``strings`` if given.

    Complementary flip sets share a row through the canonical-class sign, so
    the relaxed conditions at the threshold are encoded automatically.
    """
    if not 1 <= m < n:
        raise PreconditionError(f"need 1 <= m < n, got n={n}, m={m}")
    if n > CONSTRAINT_MAX_QUBITS:
        raise PreconditionError(f"constraint systems are limited to n <= {CONSTRAINT_MAX_QUBITS}")
    columns = tuple(generic_family(n, m) if strings is None else strings)
    for p in columns:
        if p.n != n or p.weight > m or p.weight == 0:
            raise PreconditionError(f"column {p} is not a weight-1..{m} string on {n} qubits")
    entries = []
    for j, p in enumerate(columns):
        label, part, sign = string_bucket(p)
        if label != "epsilon":
            entries.append((f"{label}.{'im' if part else 're'}", j, sign))
    rows = sorted({r for r, _, _ in entries}, key=lambda r: (_row_order(r[:-3]), r[-2:]))
    where = {r: i for i, r in enumerate(rows)}
    matrix = np.zeros((len(rows), len(columns)), dtype=np.int8)
    for r, j, sign in entries:
        matrix[where[r], j] += sign
    return ConstraintSystem(n, m, columns, tuple(rows), matrix)


@dataclass(frozen=True, eq=False)
class NullspaceBasis:
    columns: tuple[PauliString, ...]
    vectors: tuple[dict[int, Fraction], ...]  # sparse: column index -> value
    rank: int

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def dense(self, k: int) -> list[Fraction]:
        out = [Fraction(0)] * len(self.columns)
        for j, v in self.vectors[k].items():
            out[j] = v
        return out

    def combine(self, coeffs: Sequence[int]) -> list[Fraction]:
        out = [Fraction(0)] * len(self.columns)
        for c, vec in zip(coeffs, self.vectors):
            if c:
                for j, v in vec.items():
                    out[j] += c * v
        return out

    def to_json(self) -> list:
        return [
            [
                {"string": str(self.columns[j]), "coeff_num": v.numerator, "coeff_den": v.denominator}
                for j, v in sorted(vec.items())
            ]
            for vec in self.vectors
        ]


def integer_rref(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan elimination over the integers.

    Returns (reduced rows, pivot columns).  Each pivot column is zero outside
    its pivot row; rows are divided by their content to keep entries small.
    """
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                e = M[i][c]
                row = [pv * x - e * y for x, y in zip(M[i], M[r])]
                g = math.gcd(*row)
                M[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(C: ConstraintSystem) -> NullspaceBasis:
    ncols = len(C.columns)
    reduced, pivots = integer_rref(C.matrix.tolist(), ncols)
    pivot_set = set(pivots)
    vectors = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = {f: Fraction(1)}
        for row, p in zip(reduced, pivots):
            if row[f] != 0:
                vec[p] = Fraction(-row[f], row[p])
        vectors.append(vec)
    return NullspaceBasis(C.columns, tuple(vectors), len(pivots))


def exact_product(C: ConstraintSystem, J: Sequence[Fraction]) -> list[Fraction]:
    """Matrix times a rational vector, exactly."""
    out = [Fraction(0)] * len(C.rows)
    for i, j in zip(*np.nonzero(C.matrix)):
        if J[j]:
            out[i] += int(C.matrix[i, j]) * J[j]
    return out


@dataclass(frozen=True)
class TheoremReport:
    n: int
    m: int
    m_star: int
    samples: int
    seed: int
    nullspace_dimension: int
    max_residual: float
    max_epsilon_gap: float
    all_passed: bool
    failures: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "m_star": self.m_star,
            "samples": self.samples,
            "seed": self.seed,
            "nullspace_dimension": self.nullspace_dimension,
            "max_residual": float(f"{self.max_residual:.12g}"),
            "all_passed": self.all_passed,
        }


def _random_combination(basis: NullspaceBasis, rng: random.Random) -> list[Fraction]:
    coeffs = [rng.randint(-9, 9) for _ in range(basis.dimension)]
    return basis.combine(coeffs)


def forced_degeneracy_residual(H: FewBodyHamiltonian) -> tuple[float, float]:
    """(max relative eigen-residual of G+/G- at the G+ energy, |eps(G-) - eps(G+)|)."""
    scale = max(1.0, H.coupling_l1())
    gp, gm = ghz(H.n, 1).amplitudes, ghz(H.n, -1).amplitudes
    hp, hm = apply(H, ghz(H.n, 1)).amplitudes, apply(H, ghz(H.n, -1)).amplitudes
    eps = float(np.vdot(gp, hp).real)
    eps_minus = float(np.vdot(gm, hm).real)
    res = max(np.linalg.norm(hp - eps * gp), np.linalg.norm(hm - eps * gm)) / scale
    return float(res), abs(eps_minus - eps) / scale


def verify_forced_degeneracy(n: int, m: int, samples: int = 100, seed: int = 0, tol: float = 1e-11) -> TheoremReport:
    """Sample Hamiltonians with G+ as eigenstate and check G- shares the eigenvalue.

    Requires m below the threshold [(n + 1) / 2].
    """
    ms = m_star(n)
    if not m < ms:
        raise PreconditionError(f"m={m} is not below the threshold m*={ms} for n={n}")
    C = build_constraints(n, m)
    basis = nullspace(C)
    rng = random.Random(seed)
    worst = gap_worst = 0.0
    failures = []
    for k in range(samples):
        J = _random_combination(basis, rng)
        exact_ok = not any(exact_product(C, J))
        H = C.hamiltonian(J)
        res, gap = forced_degeneracy_residual(H)
        worst, gap_worst = max(worst, res), max(gap_worst, gap)
        if not (exact_ok and res < tol and gap < tol):
            failures.append(k)
    return TheoremReport(n, m, ms, samples, seed, basis.dimension, worst, gap_worst, not failures, tuple(failures))


@dataclass(frozen=True, eq=False)
class Witness:
    hamiltonian: FewBodyHamiltonian
    source: str
    epsilon: float
    phi_bar_norm: float
    multiplicity: int
    rank: int


def _model_candidates(n: int) -> list[tuple[str, FewBodyHamiltonian]]:
    if n == 4:
        return [
            ("symmetric_ring4(1, -1)", symmetric_ring4(1.0, -1.0)),
            ("symmetric_ring4(0.5, -1)", symmetric_ring4(0.5, -1.0)),
        ]
    if n == 5:
        return [("five_qubit_three_body(-0.3, -1)", five_qubit_three_body(-0.3, -1.0))]
    return []


def check_witness(H: FewBodyHamiltonian, source: str, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> Witness | None:
    cond = eigenstate_conditions(H)
    if not cond.is_plus_eigenstate or cond.phi_bar_norm <= cond.tolerance:
        return None
    match = analyze(H, {"ghz+": ghz(H.n, 1)}, cluster_tol, census=False).targets[0]
    if not match.is_eigenstate or match.multiplicity != 1:
        return None
    return Witness(H, source, cond.epsilon, cond.phi_bar_norm, match.multiplicity, match.rank)


def find_nondegenerate_witness(n: int, m: int, seed: int = 0, attempts: int = 20) -> Witness | None:
    """A Hamiltonian of body order <= m with G+ as a nondegenerate eigenstate.

    Tries the explicit 4- and 5-qubit models first, then random nullspace
    samples.  Requires m_star(n) <= m < n.
    """
    ms = m_star(n)
    if not ms <= m < n:
        raise PreconditionError(f"need m*={ms} <= m < n={n}, got m={m}")
    for source, H in _model_candidates(n):
        if H.declared_body_order <= m:
            w = check_witness(H, source)
            if w is not None:
                return w
    C = build_constraints(n, m)
    basis = nullspace(C)
    rng = random.Random(seed)
    for k in range(attempts):
        H = C.hamiltonian(_random_combination(basis, rng))
        w = check_witness(H, f"nullspace sample {k} (seed {seed})")
        if w is not None:
            return w
    return None
