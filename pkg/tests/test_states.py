import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ghzeig.errors import DimensionError, PreconditionError
from ghzeig.states import (
    StateVector,
    basis_state,
    complement,
    detect_generalized_ghz,
    detect_local_ghz,
    ghz,
    gtilde,
    inner,
    reduced_density_matrix,
    to_local_basis,
)

R = 1 / math.sqrt(2)


def amps(n, entries):
    v = np.zeros(1 << n, dtype=complex)
    for bits, a in entries.items():
        v[int(bits, 2)] = a
    return v


def test_ghz_examples():
    assert np.allclose(ghz(2, "+").amplitudes, amps(2, {"00": R, "11": R}))
    assert np.allclose(ghz(4, "-").amplitudes, amps(4, {"0000": R, "1111": -R}))
    assert np.allclose(ghz(1, "+").amplitudes, [R, R])
    assert abs(ghz(12, -1).norm() - 1) < 1e-14


def test_gtilde_examples():
    assert np.allclose(gtilde(3, (1,), "+").amplitudes, amps(3, {"100": R, "011": R}))
    assert np.allclose(gtilde(4, (1, 2), "-").amplitudes, amps(4, {"1100": R, "0011": -R}))
    assert np.array_equal(gtilde(4, (), "+").amplitudes, ghz(4, "+").amplitudes)


@pytest.mark.parametrize("bad", [(2, 1), (1, 1), (0,), (5,)])
def test_gtilde_rejects_bad_indices(bad):
    with pytest.raises(PreconditionError):
        gtilde(4, bad)


def test_state_vector_checks_length():
    with pytest.raises(DimensionError):
        StateVector(2, np.zeros(3))
    v = ghz(3)
    with pytest.raises(ValueError):
        v.amplitudes[0] = 0


def test_inner_examples():
    assert inner(ghz(4, "+"), ghz(4, "-")) == 0
    assert inner(gtilde(5, (1, 2), "+"), gtilde(5, (1, 3), "+")) == 0
    assert inner(ghz(4, "+"), gtilde(4, (1, 2), "+")) == 0
    with pytest.raises(DimensionError):
        inner(ghz(3), ghz(4))


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_inner_conjugate_linear_and_cauchy_schwarz(n, seed):
    rng = np.random.default_rng(seed)
    a = StateVector(n, rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))
    b = StateVector(n, rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))
    c = 0.3 - 1.7j
    assert np.isclose(inner(StateVector(n, c * a.amplitudes), b), np.conj(c) * inner(a, b))
    assert abs(inner(a, b)) <= a.norm() * b.norm() + 1e-14


def test_rdm_examples():
    rho = reduced_density_matrix(ghz(3, "+"), (1,))
    assert np.allclose(rho.entries, np.eye(2) / 2)
    rho = reduced_density_matrix(basis_state(3, "000"), (2, 3))
    expect = np.zeros((4, 4))
    expect[0, 0] = 1
    assert np.allclose(rho.entries, expect)
    with pytest.raises(PreconditionError):
        reduced_density_matrix(ghz(3), ())
    with pytest.raises(PreconditionError):
        reduced_density_matrix(ghz(3), (1, 2, 3))


def test_rdm_keeps_qubit_order():
    # |01> on (1, 2): keeping qubit 2 alone gives |1><1|
    rho = reduced_density_matrix(basis_state(2, "01"), (2,))
    assert np.allclose(rho.entries, [[0, 0], [0, 1]])
    rho = reduced_density_matrix(basis_state(3, "011"), (1, 3))
    assert rho.entries[0b01, 0b01] == 1


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_rdm_is_a_density_matrix(n, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi = StateVector(n, psi / np.linalg.norm(psi))
    k = int(rng.integers(1, n))
    subset = tuple(sorted(int(s) for s in rng.choice(np.arange(1, n + 1), size=k, replace=False)))
    rho = reduced_density_matrix(psi, subset).entries
    assert np.abs(rho - rho.conj().T).max() < 1e-13
    assert abs(np.trace(rho) - 1) < 1e-13
    assert np.linalg.eigvalsh(rho).min() >= -1e-12


def test_rdm_matches_explicit_partial_trace():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    full = np.outer(psi, psi.conj()).reshape(2, 2, 2, 2, 2, 2)
    # keep qubits 1 and 3, trace qubit 2
    expect = np.einsum("ajbcjd->abcd", full).reshape(4, 4)
    got = reduced_density_matrix(StateVector(3, psi), (1, 3)).entries
    assert np.allclose(got, expect)


def test_detect_generalized_ghz_examples():
    assert detect_generalized_ghz(ghz(4, "+")) == ("0000", 0.0)
    v = StateVector(4, amps(4, {"0101": R, "1010": -R}))
    hit = detect_generalized_ghz(v)
    assert hit.bits == "0101" and hit.phase == pytest.approx(math.pi)
    assert detect_generalized_ghz(StateVector(2, amps(2, {"00": R, "01": R}))) is None


def test_detect_generalized_ghz_ignores_global_phase():
    v = StateVector(3, np.exp(0.7j) * amps(3, {"110": R, "001": 1j * R}))
    hit = detect_generalized_ghz(v)
    # s has qubit 1 in state 0, so s = 001 and the relative phase is -pi/2
    assert hit.bits == "001" and hit.phase == pytest.approx(-math.pi / 2)


def test_detect_local_ghz_finds_rotated_states():
    # Hadamard on qubits 2 and 3 of G+ (computed independently as a Kronecker product)
    H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    U = np.kron(np.kron(np.eye(2), H), H)
    psi = StateVector(3, U @ ghz(3).amplitudes)
    assert detect_generalized_ghz(psi) is None
    hit = detect_local_ghz(psi)
    assert hit.bases == "ZXX" and hit.bits == "000" and hit.phase == 0.0
    assert detect_local_ghz(ghz(4, -1)).bases == "ZZZZ"
    assert detect_local_ghz(basis_state(3, "010")) is None


def test_to_local_basis_is_unitary():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    v = StateVector(4, psi / np.linalg.norm(psi))
    assert to_local_basis(v, "XYZY").norm() == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gtilde_complement_identity_small(n):
    for k in range(1, n):
        for S in itertools.combinations(range(1, n + 1), k):
            for s in (1, -1):
                assert np.allclose(gtilde(n, S, s).amplitudes, s * gtilde(n, complement(S, n), s).amplitudes)
