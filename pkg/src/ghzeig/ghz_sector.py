"""Flip-class bookkeeping for Hamiltonians acting on GHZ states.

A Pauli string with X-sites A, Y-sites B and Z-sites C maps

    p |G+>  =  i^{|B|} |G~_{sigma, A u B}>,      sigma = (-1)^{|B| + |C|}
    p |G->  =  i^{|B|} |G~_{-sigma, A u B}>

with the diagonal case (A u B empty) giving G+ or G- according to the
parity of |C|.  Because |G~_{s,S}> = (+1 or s) |G~_{s,N\\S}>, each class
{S, N\\S} is labelled by a canonical representative: the smaller set, or on
a tie the one containing qubit 1.

Decomposition coefficients follow the usual labelling for both source
states: ``a`` collects strings with sigma = + and ``b`` those with
sigma = -.  For the source G+ they multiply G~_{+,R} and G~_{-,R}; for the
source G- the families swap, so they multiply G~_{-,R} and G~_{+,R}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError
from .hamiltonian import FewBodyHamiltonian, apply, body_order
from .pauli import PauliString, Phase
from .states import (
    MultiIndex,
    StateVector,
    complement,
    ghz,
    gtilde,
    multi_index,
    sign_value,
)


def m_star(n: int) -> int:
    """Threshold body order [(n + 1) / 2]."""
    return (n + 1) // 2


def is_canonical(S: MultiIndex, n: int) -> bool:
    k = len(S)
    return 2 * k < n or (2 * k == n and S[0] == 1)


def canonical_flip_class(S, sigma, n: int) -> tuple[MultiIndex, int]:
    """Return (R, f) with G~_{sigma,S} = f * G~_{sigma,R} and R canonical."""
    S = multi_index(S, n)
    if not 1 <= len(S) <= n - 1:
        raise PreconditionError(f"flip set {S} must be nonempty and proper for n={n}")
    s = sign_value(sigma)
    if is_canonical(S, n):
        return S, 1
    return complement(S, n), s


class FlipAction(NamedTuple):
    flip_set: MultiIndex
    sigma: int
    phase: Phase


def string_flip_action(p: PauliString) -> FlipAction:
    """Closed-form image of |G+> under ``p``: phase * G~_{sigma, flip_set}.

    For an empty flip set the image is G+ (sigma = +1) or G- (sigma = -1).
    """
    n_y = p.y_count
    n_z = (p.z & ~p.x).bit_count()
    sigma = -1 if (n_y + n_z) & 1 else 1
    return FlipAction(p.sites(p.x), sigma, Phase(n_y))


def bucket_label(kind: str, R: MultiIndex) -> str:
    return f"{kind}[({','.join(map(str, R))})]"


def _bucket_order(R: MultiIndex) -> tuple:
    return (len(R), R)


@dataclass(frozen=True)
class GhzDecomposition:
    """H|G_s> = epsilon G_s + b0 G_{-s} + sum_R a_R G~_{s,R} + b_R G~_{-s,R}."""

    n: int
    source_sign: int
    epsilon: float
    b0: complex
    a: dict[MultiIndex, complex] = field(default_factory=dict)
    b: dict[MultiIndex, complex] = field(default_factory=dict)

    def buckets(self) -> dict[str, complex]:
        """All off-diagonal coefficients keyed 'b0', 'a[(1,2)]', ...; deterministic order."""
        out = {"b0": self.b0}
        for R in sorted(self.a, key=_bucket_order):
            out[bucket_label("a", R)] = self.a[R]
        for R in sorted(self.b, key=_bucket_order):
            out[bucket_label("b", R)] = self.b[R]
        return out

    def off_diagonal_norm(self) -> float:
        """Norm of the component orthogonal to the source state."""
        return math.sqrt(sum(abs(v) ** 2 for v in self.buckets().values()))

    def reconstruct(self) -> StateVector:
        s = self.source_sign
        amps = self.epsilon * ghz(self.n, s).amplitudes + self.b0 * ghz(self.n, -s).amplitudes
        for R, c in self.a.items():
            amps = amps + c * gtilde(self.n, R, s).amplitudes
        for R, c in self.b.items():
            amps = amps + c * gtilde(self.n, R, -s).amplitudes
        return StateVector(self.n, amps)


def _check_order(H: FewBodyHamiltonian) -> None:
    if body_order(H) >= H.n:
        raise PreconditionError(f"body order {body_order(H)} must be below n={H.n}")


def _decompose(H: FewBodyHamiltonian, source: int) -> GhzDecomposition:
    _check_order(H)
    n = H.n
    eps = 0.0
    b0 = 0j
    a: dict[MultiIndex, complex] = {}
    b: dict[MultiIndex, complex] = {}
    for t in H.terms:
        S, sigma, phase = string_flip_action(t.string)
        if not S:
            if sigma == 1:
                eps += t.coefficient
            else:
                b0 += t.coefficient
            continue
        # the image of G_source lies in the family sigma * source
        R, f = canonical_flip_class(S, sigma * source, n)
        bucket = a if sigma == 1 else b
        bucket[R] = bucket.get(R, 0j) + t.coefficient * f * phase.value
    return GhzDecomposition(n, source, eps, b0, a, b)


def decompose_plus(H: FewBodyHamiltonian) -> GhzDecomposition:
    return _decompose(H, 1)


def decompose_minus(H: FewBodyHamiltonian) -> GhzDecomposition:
    return _decompose(H, -1)


def default_tolerance(H: FewBodyHamiltonian) -> float:
    return 1e-11 * max(1.0, H.coupling_l1())


def phi_bar(H: FewBodyHamiltonian) -> StateVector:
    """H|G-> - epsilon |G->, the residual that decides whether G- splits off."""
    d = decompose_minus(H)
    return StateVector(H.n, d.reconstruct().amplitudes - d.epsilon * ghz(H.n, -1).amplitudes)


@dataclass(frozen=True)
class ConditionReport:
    n: int
    body_order: int
    tolerance: float
    is_plus_eigenstate: bool
    epsilon: float
    residuals: dict[str, complex]
    phi_bar: dict[str, complex]
    phi_bar_norm: float
    phi_bar_hypothetical: bool
    degeneracy_forced: bool
    minus_epsilon: float

    def to_json(self) -> dict:
        def cplx(z):
            return {"re": _fmt(z.real), "im": _fmt(z.imag)}

        return {
            "n": self.n,
            "body_order": self.body_order,
            "m_star": m_star(self.n),
            "tolerance": _fmt(self.tolerance),
            "is_plus_eigenstate": self.is_plus_eigenstate,
            "epsilon": _fmt(self.epsilon),
            "residuals": {k: cplx(v) for k, v in self.residuals.items()},
            "phi_bar": {k: cplx(v) for k, v in self.phi_bar.items()},
            "phi_bar_norm": _fmt(self.phi_bar_norm),
            "phi_bar_hypothetical": self.phi_bar_hypothetical,
            "degeneracy_forced": self.degeneracy_forced,
        }


def _fmt(x: float) -> float:
    return float(f"{x:.12g}")


def eigenstate_conditions(H: FewBodyHamiltonian, tol: float | None = None) -> ConditionReport:
    """Is |G+> an eigenstate of H, and if so does |G-> necessarily share it?

    ``phi_bar_norm`` is always computed from the G- decomposition; when G+ is
    not an eigenstate the value is flagged as hypothetical.
    """
    if tol is None:
        tol = default_tolerance(H)
    plus = decompose_plus(H)
    minus = decompose_minus(H)
    residuals = plus.buckets()
    is_eig = all(abs(v) < tol for v in residuals.values())
    phibar = minus.buckets()
    phibar_norm = minus.off_diagonal_norm()
    return ConditionReport(
        n=H.n,
        body_order=body_order(H),
        tolerance=tol,
        is_plus_eigenstate=is_eig,
        epsilon=plus.epsilon,
        residuals=residuals,
        phi_bar=phibar,
        phi_bar_norm=phibar_norm,
        phi_bar_hypothetical=not is_eig,
        degeneracy_forced=is_eig and phibar_norm < tol,
        minus_epsilon=minus.epsilon,
    )


def decomposition_json(d: GhzDecomposition) -> dict:
    return {
        "source": "+" if d.source_sign == 1 else "-",
        "epsilon": _fmt(d.epsilon),
        "buckets": {k: {"re": _fmt(v.real), "im": _fmt(v.imag)} for k, v in d.buckets().items()},
    }


def reconstruction_error(H: FewBodyHamiltonian, sign) -> float:
    """Relative gap between the combinatorial decomposition and the dense matvec."""
    s = sign_value(sign)
    d = _decompose(H, s)
    direct = apply(H, ghz(H.n, s)).amplitudes
    diff = np.linalg.norm(direct - d.reconstruct().amplitudes)
    return float(diff / max(1.0, H.coupling_l1()))
