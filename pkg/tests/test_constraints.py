import random
from fractions import Fraction

import numpy as np
import pytest

from ghzeig.constraints import (
    build_constraints,
    exact_product,
    find_nondegenerate_witness,
    integer_rref,
    nullspace,
    string_bucket,
    verify_forced_degeneracy,
)
from ghzeig.errors import PreconditionError
from ghzeig.ghz_sector import decompose_plus, eigenstate_conditions
from ghzeig.hamiltonian import generic_family, ring_xz4_strings
from ghzeig.pauli import parse
from ghzeig.spectra import analyze
from ghzeig.states import ghz

# exact elimination result for the full 66-string (4, 2) family, frozen as a regression value
NULLSPACE_DIM_4_2 = 43


def test_string_bucket():
    assert string_bucket(parse("ZZII")) == ("epsilon", 0, 1)
    assert string_bucket(parse("ZIII")) == ("b0", 0, 1)
    assert string_bucket(parse("IIXX")) == ("a[(1,2)]", 0, 1)
    assert string_bucket(parse("YIII")) == ("b[(1)]", 1, 1)
    assert string_bucket(parse("YYII")) == ("a[(1,2)]", 0, -1)
    # complement of (2,3) in the sigma = - family carries a minus sign
    assert string_bucket(parse("IXYI")) == ("b[(1,4)]", 1, -1)


def test_ring_family_recovers_opposite_couplings():
    C = build_constraints(4, 2, ring_xz4_strings())
    B = nullspace(C)
    assert B.rank == 2 and B.dimension == 6
    nonzero = [r for r in C.matrix.tolist() if any(r)]
    # columns are XX on bonds (12), (23), (34), (41), then the four ZZ bonds
    assert sorted(nonzero) == sorted([[1, 0, 1, 0, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0, 0, 0]])
    for k in range(B.dimension):
        J = B.dense(k)
        assert J[0] == -J[2] and J[1] == -J[3]


def test_two_qubit_rows():
    C = build_constraints(2, 1)
    assert [str(p) for p in C.columns] == ["XI", "YI", "ZI", "IX", "IY", "IZ"]
    assert C.rows == ("b0.re", "a[(1)].re", "b[(1)].im")
    assert C.matrix[0].tolist() == [0, 0, 1, 0, 0, 1]


def test_matrix_shape_and_entries():
    for n, m in [(4, 2), (5, 2), (6, 3)]:
        C = build_constraints(n, m)
        assert C.matrix.shape[1] == len(generic_family(n, m))
        assert set(np.unique(C.matrix)) <= {-1, 0, 1}


def test_matrix_faithful_to_decomposition(rng):
    C = build_constraints(5, 3)
    for _ in range(50):
        J = rng.normal(size=len(C.columns))
        vals = C.bucket_values(J)
        d = decompose_plus(C.hamiltonian(J))
        for label, z in d.buckets().items():
            re, im = vals.get(label + ".re", 0.0), vals.get(label + ".im", 0.0)
            assert abs(complex(re, im) - z) < 1e-13
        assert set(vals) <= {f"{k}.{p}" for k in d.buckets() for p in ("re", "im")}


def test_integer_rref_rank_matches_numpy(rng):
    for _ in range(30):
        rows = rng.integers(-2, 3, size=(int(rng.integers(1, 9)), int(rng.integers(1, 12)))).tolist()
        _, pivots = integer_rref(rows, len(rows[0]))
        assert len(pivots) == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_nullspace_zero_rows():
    C = build_constraints(4, 2, [parse("ZZII"), parse("IZZI")])
    B = nullspace(C)
    assert C.matrix.shape == (0, 2) and B.dimension == 2 and B.rank == 0


def test_full_family_regression_and_soundness():
    C = build_constraints(4, 2)
    B = nullspace(C)
    assert len(C.columns) == 66
    assert B.dimension == NULLSPACE_DIM_4_2 == 66 - B.rank
    for k in range(B.dimension):
        assert not any(exact_product(C, B.dense(k)))
        H = C.hamiltonian(B.dense(k))
        rep = eigenstate_conditions(H)
        assert rep.is_plus_eigenstate
        assert max((abs(v) for v in rep.residuals.values()), default=0.0) == 0.0
    rng = random.Random(5)
    for _ in range(20):
        J = B.combine([rng.randint(-9, 9) for _ in range(B.dimension)])
        assert decompose_plus(C.hamiltonian(J)).off_diagonal_norm() == 0.0


def test_nullspace_vectors_independent():
    B = nullspace(build_constraints(5, 2))
    M = np.array([[float(x) for x in B.dense(k)] for k in range(B.dimension)])
    assert np.linalg.matrix_rank(M) == B.dimension


def test_nullspace_json_is_rational():
    data = nullspace(build_constraints(4, 2, ring_xz4_strings())).to_json()
    assert len(data) == 6
    triples = {(e["string"], e["coeff_num"], e["coeff_den"]) for e in data[0]}
    assert triples == {("IIXX", 1, 1), ("XXII", -1, 1)}


@pytest.mark.parametrize("n,m", [(4, 1), (5, 1), (5, 2), (6, 2)])
def test_forced_degeneracy(n, m):
    rep = verify_forced_degeneracy(n, m, samples=30, seed=7)
    assert rep.all_passed and rep.max_residual < 1e-11
    assert rep.to_json()["m_star"] == (n + 1) // 2


def test_forced_degeneracy_rejects_threshold():
    with pytest.raises(PreconditionError, match="m\\*=2"):
        verify_forced_degeneracy(4, 2)


def test_build_constraints_preconditions():
    with pytest.raises(PreconditionError):
        build_constraints(3, 3)
    with pytest.raises(PreconditionError):
        build_constraints(11, 1)


@pytest.mark.parametrize("n,m", [(4, 2), (5, 3)])
def test_witness(n, m):
    w = find_nondegenerate_witness(n, m)
    assert w is not None and w.multiplicity == 1 and w.phi_bar_norm > 0
    rep = analyze(w.hamiltonian, {"ghz+": ghz(n, 1)}, census=False).target("ghz+")
    assert rep.multiplicity == 1 and rep.is_eigenstate


def test_witness_four_qubit_model():
    w = find_nondegenerate_witness(4, 2)
    assert w.source.startswith("symmetric_ring4") and w.epsilon == -1


def test_witness_rejects_below_threshold():
    with pytest.raises(PreconditionError):
        find_nondegenerate_witness(5, 2)


def test_witness_from_nullspace_sample():
    w = find_nondegenerate_witness(6, 3)
    assert w is not None and "nullspace" in w.source


def test_exact_product_uses_fractions():
    C = build_constraints(4, 2, ring_xz4_strings())
    J = [Fraction(1, 3), 0, Fraction(-1, 3), 0, 0, 0, 0, 0]
    assert exact_product(C, J) == [0] * len(C.rows)
