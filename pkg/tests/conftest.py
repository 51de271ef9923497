from functools import reduce

import numpy as np
import pytest
from hypothesis import strategies as st

from ghzeig.hamiltonian import FewBodyHamiltonian
from ghzeig.pauli import PauliString

# explicit matrices, independent of the bitmask code paths
PAULI_MATRICES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_matrix(label: str) -> np.ndarray:
    return reduce(np.kron, [PAULI_MATRICES[c] for c in label])


def dense_oracle(H: FewBodyHamiltonian) -> np.ndarray:
    dim = 1 << H.n
    M = np.zeros((dim, dim), dtype=complex)
    for t in H.terms:
        M += t.coefficient * kron_matrix(str(t.string))
    return M


def random_string(rng: np.random.Generator, n: int, max_weight: int) -> PauliString:
    w = int(rng.integers(1, max_weight + 1))
    sites = rng.choice(np.arange(1, n + 1), size=w, replace=False)
    return PauliString.from_sites(n, {int(s): "XYZ"[int(rng.integers(3))] for s in sites})


def random_hamiltonian(rng: np.random.Generator, n: int, m: int, n_terms: int = 12) -> FewBodyHamiltonian:
    terms = [(float(rng.normal()), random_string(rng, n, m)) for _ in range(n_terms)]
    return FewBodyHamiltonian.from_terms(n, terms, body_order=m)


def pauli_labels(min_n=1, max_n=6):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.text(alphabet="IXYZ", min_size=n, max_size=n)
    )


def pauli_pairs(min_n=1, max_n=6):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.tuples(
            st.text(alphabet="IXYZ", min_size=n, max_size=n),
            st.text(alphabet="IXYZ", min_size=n, max_size=n),
        )
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
