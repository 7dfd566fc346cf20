import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffmat import golden
from diffmat.catalog import catalog_entries
from diffmat.designs import (BilinearWitness, ContractedDifferenceMatrix, DifferenceMatrix, DMWitness,
                             delete_rows, elem_ab_feasible, is_normalized, max_rows_bound, normalize_dm,
                             p_expand, sylow2_obstruction, trivial_cdm, trivial_dm, verify_cdm_fast,
                             verify_cdm_full, verify_dm)
from diffmat.constructions import drake_dm
from diffmat.errors import CapacityError, StructuralError
from diffmat.groups import GroupSpec, abelian_p_groups


def G(text):
    return GroupSpec.parse(text)


def rows(text):
    return [r.split() for r in text.splitlines()]


def ex11():
    return DifferenceMatrix.from_rows(G("Z2^3"), 1, rows(golden.EXAMPLE_1_1))


def ex53():
    return ContractedDifferenceMatrix.from_rows(G("Z4xZ2"), 0, rows(golden.EXPANSION_Z4Z2_M))


def z3z3():
    return ContractedDifferenceMatrix.from_rows(G("Z3xZ3"), 0, rows(golden.EXPANSION_Z3Z3_M))


CATALOG = [e.matrix for e in catalog_entries()]


def test_shape_invariants():
    with pytest.raises(StructuralError):
        DifferenceMatrix.from_rows(G("Z4"), 1, [[0, 1, 2]])
    with pytest.raises(StructuralError):
        ContractedDifferenceMatrix.from_rows(G("Z4"), 0, [[1, 2, 0]])
    with pytest.raises(StructuralError):
        DifferenceMatrix.from_rows(G("Z4"), 1, [])
    assert not ex11().verified


def test_expansion_examples():
    E = p_expand(ex53())
    assert str(E) == golden.EXPANSION_Z4Z2
    assert E.text_rows()[3][3] == "01"
    E = p_expand(z3z3())
    assert str(E) == golden.EXPANSION_Z3Z3 and E.text_rows()[8][8] == "02"
    Z = ContractedDifferenceMatrix(G("Z2^3"), 0, np.zeros((1, 3, 3), dtype=np.int64))
    assert not p_expand(Z).entries.any() and p_expand(Z).shape == (2, 8)


def test_expansion_cap():
    M = ContractedDifferenceMatrix(G("Z2^20"), 0, np.zeros((6, 20, 20), dtype=np.int64))
    with pytest.raises(CapacityError):
        p_expand(M)


def test_verify_dm_examples():
    A = ex11()
    assert verify_dm(A) and A.verified
    B = ex11()
    B.entries[1, 1] = (1, 0, 0)
    v = verify_dm(B)
    assert not v and isinstance(v.witness, DMWitness) and 1 in v.witness.rows
    assert v.witness.multiplicity != 1
    for g in ("Z4xZ2", "Z9", "Z2^3"):
        for lam in (1, 2, 3):
            assert verify_dm(trivial_dm(G(g), lam))
    with pytest.raises(StructuralError):
        verify_dm(A, 2)


def test_verify_cdm_examples():
    assert verify_cdm_fast(ex53()) and verify_cdm_full(ex53())
    assert verify_cdm_full(z3z3())
    R = ContractedDifferenceMatrix.from_rows(G("Z4xZ2"), 0, [["01", "10", "20"], ["01", "10", "20"]])
    v = verify_cdm_fast(R)
    assert not v and isinstance(v.witness, BilinearWitness)
    img = ContractedDifferenceMatrix.from_rows(G("Z2^2"), 2, rows(golden.FIELD_IMAGE))
    assert verify_cdm_fast(img) and verify_cdm_full(img)
    assert not verify_cdm_fast(ContractedDifferenceMatrix.from_rows(G("Z2^2"), 2, [["01", "01", "00", "00"]]))


def test_bilinear_witness_is_genuine():
    G2 = G("Z4xZ2")
    M = ContractedDifferenceMatrix.from_rows(G2, 0, [["01", "10", "20"], ["21", "01", "11"]])
    v = verify_cdm_fast(M)
    assert not v
    a, b = np.array(v.witness.a), np.array(v.witness.b)
    assert np.any(a) and np.any(b)
    val = np.einsum("i,ijx,j->x", a, M.entries, b) % G2.moduli
    assert not val.any()


def test_normalize():
    D = drake_dm(2, 3)
    verify_dm(D)
    assert is_normalized(D) and normalize_dm(D) == D
    rng = np.random.default_rng(3)
    A = ex11()
    A = DifferenceMatrix(A.group, 1, A.group.reduce(A.entries + rng.integers(0, 2, (1, 8, 3))
                                                    + rng.integers(0, 2, (5, 1, 3))))
    assert verify_dm(A)
    N = normalize_dm(A)
    assert is_normalized(N) and verify_dm(N)
    assert normalize_dm(N) == N


def test_trivial_and_delete():
    assert trivial_cdm(G("Z4xZ2")).text_rows() == [["10", "20", "01"]]
    assert trivial_cdm(G("Z8")).text_rows() == [["1", "2", "4"]]
    assert trivial_cdm(G("Z4"), 2).text_rows() == [["1", "2", "0", "0"]]
    A = ex11()
    verify_dm(A)
    B = delete_rows(A, [4])
    assert B.m == 4 and B.verified and verify_dm(B)
    with pytest.raises(StructuralError):
        delete_rows(A, range(5))
    for M in CATALOG:
        verify_cdm_fast(M)
        if M.k > 1:
            D = delete_rows(M, [0])
            assert D.verified and verify_cdm_fast(D)


def test_bounds():
    assert max_rows_bound(G("Z2^3"), 1) == 8
    assert sylow2_obstruction(G("Z8"), 1) and not sylow2_obstruction(G("Z8"), 2)
    assert not sylow2_obstruction(G("Z4xZ2"), 1)
    assert not elem_ab_feasible(2, 2, 0, k=3) and elem_ab_feasible(2, 2, 0, k=2)
    assert elem_ab_feasible(3, 2, 1, m=27) and not elem_ab_feasible(3, 2, 1, m=28)
    with pytest.raises(StructuralError):
        elem_ab_feasible(2, 2, 0)


def test_expansion_zero_row_and_column():
    for M in CATALOG[:20] + [ex53(), z3z3()]:
        E = p_expand(M)
        assert not E.entries[0].any() and not E.entries[:, 0].any()


def test_oracle_exhaustive_z2z2():
    # all 2x2 matrices over Z2^2 (s=0) and all 1x3 matrices over Z2^2 (s=1)
    Z = G("Z2^2")
    ct = Z.coords_table()
    for shape, s in (((2, 2), 0), ((1, 3), 1), ((2, 3), 1)):
        for idx in itertools.product(range(4), repeat=shape[0] * shape[1]):
            M = ContractedDifferenceMatrix(Z, s, ct[list(idx)].reshape(shape + (2,)))
            assert bool(verify_cdm_fast(M)) == bool(verify_cdm_full(M))


def test_oracle_exhaustive_z3():
    Z = G("Z3")
    for s in (0, 1):
        for k in (1, 2):
            for idx in itertools.product(range(3), repeat=k * (1 + s)):
                M = ContractedDifferenceMatrix(Z, s, np.array(idx).reshape(k, 1 + s, 1))
                assert bool(verify_cdm_fast(M)) == bool(verify_cdm_full(M))


SMALL = [g for n in range(1, 5) for g in abelian_p_groups(2, n)] + [G("Z3"), G("Z9"), G("Z3xZ3")]


@st.composite
def random_cdm(draw):
    spec = draw(st.sampled_from(SMALL))
    s = draw(st.integers(0, 1))
    k = draw(st.integers(1, 3))
    idx = draw(st.lists(st.integers(0, spec.order - 1), min_size=k * (spec.n + s), max_size=k * (spec.n + s)))
    ct = spec.coords_table()
    return ContractedDifferenceMatrix(spec, s, ct[idx].reshape(k, spec.n + s, spec.rank))


@settings(max_examples=300, deadline=None)
@given(random_cdm())
def test_oracle_random(M):
    assert bool(verify_cdm_fast(M)) == bool(verify_cdm_full(M))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG + [ex53(), z3z3()]), st.randoms(use_true_random=False))
def test_symmetries_preserve_verification(M, rnd):
    G_ = M.group
    X = M.indices.copy()
    cols = list(range(M.ncols))
    rnd.shuffle(cols)
    X = X[:, cols]
    for j in range(M.ncols):
        if rnd.random() < 0.5:
            X[:, j] = G_.neg_table()[X[:, j]]
    rws = list(range(M.nrows))
    rnd.shuffle(rws)
    X = X[rws]
    for i in range(M.nrows):
        if rnd.random() < 0.5:
            X[i] = G_.neg_table()[X[i]]
    assert verify_cdm_fast(ContractedDifferenceMatrix(G_, M.s, G_.decode(X)))


@settings(max_examples=200, deadline=None)
@given(random_cdm())
def test_verified_instances_respect_row_bound(M):
    E = p_expand(M)
    if verify_dm(E):
        assert E.m <= max_rows_bound(E.group, E.lam)
