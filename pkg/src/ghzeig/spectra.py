"""Exact-diagonalization reports: degeneracy clusters, GHZ targets, window scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .eigen import EigenSystem, hermitian_eigensystem
from .errors import PreconditionError, SizeError
from .hamiltonian import FewBodyHamiltonian, five_qubit_three_body, symmetric_ring4, to_dense
from .states import (
    LOCAL_SEARCH_MAX_QUBITS,
    LocalGhz,
    StateVector,
    detect_generalized_ghz,
    detect_local_ghz,
    ghz,
)

DEFAULT_CLUSTER_TOL = 1e-9
EIGENSTATE_TOL = 1e-10


def cluster_eigenvalues(w: np.ndarray, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list[tuple[int, int]]:
    """Split ascending eigenvalues into [start, stop) runs separated by gaps >= cluster_tol * range."""
    if len(w) == 0:
        return []
    threshold = cluster_tol * float(w[-1] - w[0])
    bounds = [0]
    for k in range(1, len(w)):
        if w[k] - w[k - 1] > threshold:
            bounds.append(k)
    bounds.append(len(w))
    return list(zip(bounds[:-1], bounds[1:]))


@dataclass(frozen=True)
class TargetMatch:
    name: str
    eigenvalue: float  # mean of the matched cluster
    expectation: float  # <t|H|t>
    overlap: float  # squared overlap with the cluster span
    residual: float  # || H t - <t|H|t> t ||
    multiplicity: int
    rank: int  # cluster index, 0 = ground level
    gap: float  # distance to the nearest other cluster
    is_eigenstate: bool


class GhzHit(NamedTuple):
    eigenvalue: float
    bits: str
    phase: float
    bases: str  # local Pauli eigenbasis per qubit; all "Z" = computational


@dataclass(frozen=True, eq=False)
class SpectralReport:
    n: int
    eigenvalues: np.ndarray
    clusters: list[tuple[int, int]]
    targets: list[TargetMatch]
    ghz_states: list[GhzHit] = field(default_factory=list)
    eigensystem: EigenSystem | None = None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def multiplicities(self) -> list[int]:
        return [b - a for a, b in self.clusters]

    def cluster_labels(self) -> list[int]:
        labels = []
        for c, (a, b) in enumerate(self.clusters):
            labels.extend([c] * (b - a))
        return labels

    def target(self, name: str) -> TargetMatch:
        for t in self.targets:
            if t.name == name:
                return t
        raise KeyError(name)


def _as_targets(H: FewBodyHamiltonian, targets) -> list[tuple[str, StateVector]]:
    if targets is None:
        return [("ghz+", ghz(H.n, 1)), ("ghz-", ghz(H.n, -1))]
    if isinstance(targets, Mapping):
        return list(targets.items())
    return [(f"target{k}", t) if isinstance(t, StateVector) else tuple(t) for k, t in enumerate(targets)]


def _operator_scale(M: np.ndarray) -> float:
    return max(1.0, float(np.abs(M).sum(axis=0).max()))


def analyze(
    H: FewBodyHamiltonian,
    targets: Iterable[StateVector] | Mapping[str, StateVector] | None = None,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    census: bool = True,
) -> SpectralReport:
    """Diagonalize H and locate each target state in the spectrum.

    Targets default to G+ and G-.  A target is matched to the cluster whose
    eigenvector span captures most of its weight.
    """
    M = to_dense(H)
    es = hermitian_eigensystem(M)
    w, V = es.eigenvalues, es.eigenvectors
    clusters = cluster_eigenvalues(w, cluster_tol)
    scale = _operator_scale(M)
    matches = []
    for name, t in _as_targets(H, targets):
        amps = t.amplitudes
        weights = np.abs(V.conj().T @ amps) ** 2
        captured = [float(weights[a:b].sum()) for a, b in clusters]
        c = int(np.argmax(captured))
        a, b = clusters[c]
        Ht = M @ amps
        expectation = float(np.vdot(amps, Ht).real)
        residual = float(np.linalg.norm(Ht - expectation * amps))
        neighbours = []
        if c > 0:
            neighbours.append(w[a] - w[a - 1])
        if c + 1 < len(clusters):
            neighbours.append(w[b] - w[b - 1])
        matches.append(
            TargetMatch(
                name=name,
                eigenvalue=float(w[a:b].mean()),
                expectation=expectation,
                overlap=captured[c],
                residual=residual,
                multiplicity=b - a,
                rank=c,
                gap=float(min(neighbours)) if neighbours else math.inf,
                is_eigenstate=residual < EIGENSTATE_TOL * scale,
            )
        )
    hits = _census(H.n, es, clusters) if census and H.n <= 10 else []
    return SpectralReport(H.n, w, clusters, matches, hits, es)


def _census(n: int, es: EigenSystem, clusters, tol: float = 1e-8) -> list[GhzHit]:
    local = n <= LOCAL_SEARCH_MAX_QUBITS
    hits = []
    for a, b in clusters:
        if b - a != 1:
            continue
        v = StateVector(n, es.eigenvectors[:, a])
        if local:
            found = detect_local_ghz(v, tol)
        else:
            plain = detect_generalized_ghz(v, tol)
            found = plain and LocalGhz("Z" * n, plain.bits, plain.phase)
        if found:
            hits.append(GhzHit(float(es.eigenvalues[a]), found.bits, found.phase, found.bases))
    return hits


def ghz_census(H: FewBodyHamiltonian, cluster_tol: float = DEFAULT_CLUSTER_TOL, tol: float = 1e-8) -> list[GhzHit]:
    """Every nondegenerate eigenvector of the form (|s> + e^{i phi}|s_bar>)/sqrt(2).

    For n <= 6 the form is looked for in every product of local X/Y/Z
    eigenbases, which catches GHZ states rotated by local unitaries; above
    that only the computational basis is checked.  Degenerate clusters are
    skipped since their eigenbasis is not unique.
    """
    if H.n > 10:
        raise SizeError("GHZ census is limited to n <= 10")
    es = hermitian_eigensystem(to_dense(H))
    return _census(H.n, es, cluster_eigenvalues(es.eigenvalues, cluster_tol), tol)


def is_nondegenerate_first_excited(H: FewBodyHamiltonian, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> tuple[bool, TargetMatch]:
    m = analyze(H, {"ghz+": ghz(H.n, 1)}, cluster_tol, census=False).targets[0]
    return (m.is_eigenstate and m.multiplicity == 1 and m.rank == 1), m


SCAN_MODELS: dict[str, Callable[[float, float], FewBodyHamiltonian]] = {
    "symmetric-ring4": symmetric_ring4,
    "five-qubit-3body": five_qubit_three_body,
}


class ScanRow(NamedTuple):
    ratio: float
    jz: float
    jx: float
    ghz_eigenvalue: float
    rank: int
    multiplicity: int
    in_window: bool


@dataclass(frozen=True)
class WindowScan:
    rows: list[ScanRow]
    edges: list[float]  # bisected predicate changes, ascending
    exceptional_points: list[float]  # isolated grid ratios where the predicate fails
    jz: float
    resolution: float

    @property
    def window(self) -> tuple[float, float] | None:
        """Outermost (lower, upper) edge pair, if the scan found both."""
        if len(self.edges) < 2:
            return None
        return self.edges[0], self.edges[-1]


def scan_first_excited_window(
    model: str | Callable[[float, float], FewBodyHamiltonian],
    ratios: Sequence[float],
    jz: float,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    bisect: bool = True,
    resolution: float = 1e-6,
) -> WindowScan:
    """Scan Jx/Jz and find where G+ is the nondegenerate first excited state.

    The grid localizes predicate changes and each one is bisected to
    ``resolution``.  A single failing grid point between two passing ones
    (the Jx = 0 point of both periodic models) is reported as exceptional
    rather than as two edges.
    """
    builder = SCAN_MODELS[model] if isinstance(model, str) else model
    if not jz < 0:
        raise PreconditionError(f"window scan assumes Jz < 0, got {jz}")
    grid = sorted(float(r) for r in ratios)
    if not grid:
        raise PreconditionError("empty ratio grid")
    if not all(math.isfinite(r) for r in grid):
        raise PreconditionError("ratios must be finite")

    def predicate(r: float) -> tuple[bool, TargetMatch]:
        return is_nondegenerate_first_excited(builder(r * jz, jz), cluster_tol)

    rows = []
    flags = []
    for r in grid:
        ok, m = predicate(r)
        flags.append(ok)
        rows.append(ScanRow(r, jz, r * jz, m.eigenvalue, m.rank, m.multiplicity, ok))

    exceptional = [
        grid[k] for k in range(1, len(grid) - 1)
        if not flags[k] and flags[k - 1] and flags[k + 1]
    ]
    edges = []
    k = 0
    while k < len(grid) - 1:
        if flags[k] == flags[k + 1]:
            k += 1
            continue
        if k + 2 < len(grid) and grid[k + 1] in exceptional:
            k += 2
            continue
        lo, hi, flag_lo = grid[k], grid[k + 1], flags[k]
        if bisect:
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                if predicate(mid)[0] == flag_lo:
                    lo = mid
                else:
                    hi = mid
        edges.append(0.5 * (lo + hi))
        k += 1
    return WindowScan(rows, edges, exceptional, jz, resolution)


def parse_ratio_grid(text: str) -> list[float]:
    """'start:end:step' (inclusive of end) or a comma list."""
    text = text.strip()
    if not text:
        raise PreconditionError("empty ratio grid")
    if ":" in text:
        start, end, step = (float(v) for v in text.split(":"))
        if step <= 0 or end < start:
            raise PreconditionError(f"bad ratio grid {text!r}")
        count = int(math.floor((end - start) / step + 1e-9)) + 1
        # rounding keeps points like 0.0 exact so isolated failures sit on the grid
        return [round(start + k * step, 12) for k in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]
