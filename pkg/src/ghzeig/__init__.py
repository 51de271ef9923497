"""GHZ states as eigenstates of few-body qubit Hamiltonians.

Submodules: ``pauli`` (bit-pair Pauli strings), ``states`` (GHZ and flipped
GHZ vectors, partial traces), ``hamiltonian`` (Pauli-sum Hamiltonians and the
ring models), ``ghz_sector`` (flip-class decomposition and eigenstate
conditions), ``eigen`` / ``spectra`` (exact diagonalization reports),
``constraints`` (exact nullspace of the eigenstate conditions) and ``cli``.
"""
from .ghz_sector import (
    ConditionReport,
    GhzDecomposition,
    canonical_flip_class,
    decompose_minus,
    decompose_plus,
    eigenstate_conditions,
    m_star,
    string_flip_action,
)
from .hamiltonian import (
    FewBodyHamiltonian,
    PauliTerm,
    apply,
    body_order,
    five_qubit_three_body,
    generic_family,
    ring_xz4,
    symmetric_ring4,
    to_dense,
)
from .pauli import Phase, PauliString, multiply, parse, weight
from .states import StateVector, ghz, gtilde, inner, reduced_density_matrix

__version__ = "0.1.0"
