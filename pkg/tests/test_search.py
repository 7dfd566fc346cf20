import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffmat.designs import ContractedDifferenceMatrix, verify_cdm_fast, verify_cdm_full
from diffmat.errors import StructuralError
from diffmat.groups import GroupSpec
from diffmat.search import (Mode, Outcome, SearchConfig, SearchResult, Symmetry, canonical_form,
                            first_feasible_row, merge_results, partition_space, search_cdm)


def G(text):
    return GroupSpec.parse(text)


def brute_solutions(spec, k, s):
    """Every (G, k, s) contracted matrix, as index arrays, by enumeration.

    Candidates are checked through the full expansion so the oracle shares no
    code with the search kernel or the fast verifier.
    """
    w = spec.n + s
    out = []
    for flat in itertools.product(range(spec.order), repeat=k * w):
        idx = np.array(flat, dtype=np.int64).reshape(k, w)
        M = ContractedDifferenceMatrix(spec, s, spec.decode(idx))
        if verify_cdm_full(M):
            out.append(idx)
    return out


def orbit_key(spec, idx):
    """Smallest image of ``idx`` under row/column permutations and negations."""
    neg = spec.neg_table()
    k, w = idx.shape
    best = None
    for rneg in itertools.product((0, 1), repeat=k):
        X = idx.copy()
        for i in range(k):
            if rneg[i]:
                X[i] = neg[X[i]]
        for cneg in itertools.product((0, 1), repeat=w):
            Y = X.copy()
            for j in range(w):
                if cneg[j]:
                    Y[:, j] = neg[Y[:, j]]
            for cp in itertools.permutations(range(w)):
                Z = Y[:, cp]
                for rp in itertools.permutations(range(k)):
                    key = tuple(Z[list(rp)].ravel().tolist())
                    if best is None or key < best:
                        best = key
    return best


def all_solutions(spec, k, s, symmetry):
    cfg = SearchConfig(spec, k, s, symmetry=symmetry, count_all=True, max_solutions=10**5,
                       budget=10**9)
    res = search_cdm(cfg)
    assert res.solutions == len(res.solution_list)
    return res


# -- soundness and completeness ----------------------------------------------

# Z2xZ2: |GL2(F2)| = 6 first rows, each with the two elements of order 3 as ratio
KNOWN_COUNTS = {("Z2xZ2", 2, 0): 12, ("Z4xZ2", 2, 0): 384}


@pytest.mark.parametrize("group,k,s", [
    ("Z2xZ2", 2, 0), ("Z4xZ2", 2, 0), ("Z3xZ3", 2, 0), ("Z2xZ2", 2, 1), ("Z4xZ2", 1, 0),
    ("Z2", 1, 1), ("Z3", 1, 1),
])
def test_unreduced_search_finds_exactly_the_brute_force_solutions(group, k, s):
    spec = G(group)
    brute = {tuple(x.ravel().tolist()) for x in brute_solutions(spec, k, s)}
    res = all_solutions(spec, k, s, Symmetry.none())
    found = {tuple(M.indices.ravel().tolist()) for M in res.solution_list}
    assert res.solutions == len(found) == len(brute)
    assert found == brute
    if (group, k, s) in KNOWN_COUNTS:
        assert len(brute) == KNOWN_COUNTS[group, k, s]


@pytest.mark.parametrize("group,k,s", [
    ("Z4xZ2", 3, 0), ("Z2^3", 4, 0), ("Z9xZ3", 2, 0), ("Z8xZ2", 2, 0), ("Z2xZ2", 3, 1),
])
def test_found_matrices_pass_the_full_check(group, k, s):
    res = search_cdm(SearchConfig(G(group), k, s))
    if res.outcome is Outcome.FOUND:
        assert verify_cdm_full(res.matrix)
        assert res.matrix.k == k and res.matrix.s == s
    else:
        assert res.outcome is Outcome.EXHAUSTED_NONE


def test_z4z2_three_rows_does_not_exist():
    res = search_cdm(SearchConfig(G("Z4xZ2"), 3))
    assert res.outcome is Outcome.EXHAUSTED_NONE
    assert res.label == "exhaustive"
    res = search_cdm(SearchConfig(G("Z4xZ2"), 3, symmetry=Symmetry.none()))
    assert res.outcome is Outcome.EXHAUSTED_NONE


# -- symmetry reductions -------------------------------------------------------


REDUCTIONS = [
    Symmetry(),
    Symmetry(True, False, False, False),
    Symmetry(False, True, False, False),
    Symmetry(False, False, True, False),
    Symmetry(False, False, False, True),
]


@pytest.mark.parametrize("group,k,s", [("Z4xZ2", 2, 0), ("Z2xZ2", 2, 1), ("Z3xZ3", 2, 0), ("Z2", 1, 1),
                                   ("Z2", 3, 2), ("Z4", 2, 1), ("Z3", 2, 1)])
@pytest.mark.parametrize("sym", REDUCTIONS, ids=lambda y: "+".join(y.names()) or "none")
def test_reductions_keep_every_orbit(group, k, s, sym):
    spec = G(group)
    full = all_solutions(spec, k, s, Symmetry.none())
    reduced = all_solutions(spec, k, s, sym)
    assert (full.outcome is Outcome.FOUND) == (reduced.outcome is Outcome.FOUND)
    orbits_full = {orbit_key(spec, M.indices) for M in full.solution_list}
    orbits_red = {orbit_key(spec, M.indices) for M in reduced.solution_list}
    assert orbits_red == orbits_full
    assert reduced.solutions <= full.solutions


def test_reductions_shrink_the_tree():
    spec = G("Z4xZ2")
    a = all_solutions(spec, 2, 0, Symmetry.none())
    b = all_solutions(spec, 2, 0, Symmetry())
    assert b.nodes_visited < a.nodes_visited
    assert b.solutions < a.solutions


def test_canonical_form_passes_the_reductions():
    spec = G("Z4xZ2")
    neg = spec.neg_table()
    for M in all_solutions(spec, 2, 0, Symmetry.none()).solution_list:
        X = canonical_form(M)
        assert list(X[0]) == sorted(X[0])
        assert all(X[0, j] <= neg[X[0, j]] for j in range(X.shape[1]))
        assert all(X[i, 0] <= neg[X[i, 0]] for i in range(1, X.shape[0]))
        assert orbit_key(spec, X) == orbit_key(spec, M.indices)
        assert verify_cdm_fast(ContractedDifferenceMatrix(spec, 0, spec.decode(X)))


# -- determinism and partitioning ---------------------------------------------


@pytest.mark.parametrize("group,k", [("Z4xZ2", 3), ("Z4xZ2", 2), ("Z2^3", 3), ("Z8xZ2", 2)])
def test_partition_count_does_not_change_outcome_or_nodes(group, k):
    spec = G(group)
    base = search_cdm(SearchConfig(spec, k))
    for parts in (2, 4, spec.order):
        res = search_cdm(SearchConfig(spec, k, partitions=parts))
        assert res.outcome is base.outcome
        assert res.nodes_visited == base.nodes_visited
        if base.matrix is not None:
            assert res.matrix == base.matrix


def test_workers_agree_with_sequential():
    spec = G("Z4xZ2")
    seq = search_cdm(SearchConfig(spec, 3, partitions=4))
    par = search_cdm(SearchConfig(spec, 3, partitions=4), workers=2)
    assert par.outcome is seq.outcome
    assert par.nodes_visited == seq.nodes_visited


def test_partition_space():
    cfg = SearchConfig(G("Z4xZ2"), 2)
    assert partition_space(cfg, 1) == [cfg]
    parts = partition_space(cfg, 3)
    ranges = [p.first_entry for p in parts]
    assert ranges[0][0] == 0 and ranges[-1][1] == 8
    assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))
    assert len(partition_space(cfg, 100)) == 8
    with pytest.raises(StructuralError):
        partition_space(cfg, 0)


def test_partitioned_counts_add_up():
    spec = G("Z4xZ2")
    whole = all_solutions(spec, 2, 0, Symmetry.none())
    cfg = SearchConfig(spec, 2, symmetry=Symmetry.none(), count_all=True, max_solutions=10**5,
                       partitions=5)
    res = search_cdm(cfg)
    assert res.solutions == whole.solutions
    assert [M.indices.tolist() for M in res.solution_list] == [
        M.indices.tolist() for M in whole.solution_list]


def _r(outcome, nodes):
    return SearchResult(outcome, None, nodes, (), None)


def test_merge_results():
    E, F, B = Outcome.EXHAUSTED_NONE, Outcome.FOUND, Outcome.BUDGET_EXCEEDED
    assert merge_results([_r(E, 3), _r(E, 4)]).outcome is E
    assert merge_results([_r(E, 3), _r(F, 4)]).outcome is F
    assert merge_results([_r(B, 3), _r(F, 4)]).outcome is F
    assert merge_results([_r(E, 3), _r(B, 4)]).outcome is B
    assert merge_results([_r(E, 3), _r(B, 4)]).nodes_visited == 7
    with pytest.raises(StructuralError):
        merge_results([])


# -- budgets, labels and random mode ------------------------------------------


def test_budget_exceeded():
    res = search_cdm(SearchConfig(G("Z4xZ4"), 3, budget=1000))
    assert res.outcome is Outcome.BUDGET_EXCEEDED
    assert res.matrix is None
    assert 1000 <= res.nodes_visited < 1000 + 64
    res = search_cdm(SearchConfig(G("Z4xZ4"), 3, budget=1000, partitions=4))
    assert res.outcome is Outcome.BUDGET_EXCEEDED
    assert res.nodes_visited < 1000 + 64


def test_time_limit_stops_the_run():
    # the clock is read between chunks, so the tree must outlast one chunk
    res = search_cdm(SearchConfig(G("Z8xZ2xZ2"), 3, budget=10**12, time_limit=0.05))
    assert res.outcome is Outcome.BUDGET_EXCEEDED
    assert res.elapsed < 10


def test_more_rows_than_columns():
    res = search_cdm(SearchConfig(G("Z8xZ2"), 5))
    assert res.outcome is Outcome.EXHAUSTED_NONE
    assert res.nodes_visited == 0
    assert "row_bound" in res.restrictions_applied


def test_restricted_label():
    sym = Symmetry(first_row_canonical=True)
    res = search_cdm(SearchConfig(G("Z4xZ2"), 3, symmetry=sym))
    assert res.outcome is Outcome.EXHAUSTED_NONE
    assert res.restricted
    assert res.label == "restricted_exhaustive"
    assert res.to_json()["label"] == "restricted_exhaustive"
    res = search_cdm(SearchConfig(G("Z4xZ2"), 2, symmetry=sym))
    assert res.outcome is Outcome.FOUND
    assert res.matrix.indices[0].tolist() == first_feasible_row(G("Z4xZ2")).tolist()


def test_first_feasible_row():
    spec = G("Z4xZ4xZ2")
    row = first_feasible_row(spec)
    assert [tuple(c) for c in spec.decode(row).tolist()] == [
        (0, 0, 1), (0, 1, 0), (0, 2, 0), (1, 0, 0), (2, 0, 0)]


def test_config_validation():
    spec = G("Z4xZ2")
    for kw in ({"k": 0}, {"k": 1, "s": -1}, {"k": 1, "budget": 0}, {"k": 1, "partitions": 0},
               {"k": 1, "time_limit": 0}):
        with pytest.raises(StructuralError):
            SearchConfig(spec, **kw)
    assert SearchConfig(spec, 1).symmetry == Symmetry()
    assert SearchConfig(spec, 1, mode="random").symmetry == Symmetry.none()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_random_mode_is_reproducible(seed):
    cfg = SearchConfig(G("Z4xZ2xZ2"), 3, mode=Mode.RANDOM, seed=seed, budget=10**6)
    a, b = search_cdm(cfg), search_cdm(cfg)
    assert a.outcome is b.outcome
    assert a.nodes_visited == b.nodes_visited
    assert a.seed == seed
    if a.outcome is Outcome.FOUND:
        assert a.matrix == b.matrix
        assert verify_cdm_full(a.matrix)


def test_random_mode_seeds_differ():
    spec = G("Z4xZ2xZ2")
    mats = {str(search_cdm(SearchConfig(spec, 3, mode=Mode.RANDOM, seed=s, budget=10**6)).matrix)
            for s in range(6)}
    assert len(mats) > 1


def test_random_mode_never_claims_nonexistence():
    res = search_cdm(SearchConfig(G("Z4xZ2"), 3, mode=Mode.RANDOM, seed=1, budget=20_000))
    assert res.outcome is Outcome.BUDGET_EXCEEDED
    assert res.restarts > 0
