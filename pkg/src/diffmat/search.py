"""Exhaustive and randomized search for contracted difference matrices.

Entries are assigned in row-major order.  For every coefficient vector ``a``
whose last nonzero coordinate sits in the current row, the kernel keeps the
multiplicity table of ``sum_j c_j (aM)_j`` over the completed columns and
prunes as soon as some element is hit more than ``p^s`` times.  With
``s = 0`` this is exactly the collision test ``aMb^T = 0``.

The symmetry reductions below are all property preserving:

* column order: row 0 nondecreasing, strictly increasing when ``s = 0``
  (its entries are then distinct);
* column negation: each row-0 entry is no larger than its negative;
* row negation: each later row starts with an entry no larger than its negative;
* row order: rows ``1..k-1`` are lexicographically nondecreasing.

Fixing row 0 to its lexicographically first feasible value is not known to
be property preserving, and results obtained with it are labelled restricted.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .designs import ContractedDifferenceMatrix, coefficient_vectors, verify_cdm_fast
from .errors import StructuralError
from .groups import GroupSpec

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

DEFAULT_BUDGET = 10**7
CHUNK = 2_000_000

COLSORT, COLNEG, ROWNEG, ROWSORT = 1, 2, 4, 8

RUNNING, FOUND, EXHAUSTED = 0, 1, 2

# st layout: pos, nodes, solutions, restarts, initialised
_POS, _NODES, _NSOL, _RESTARTS, _INIT = range(5)


@njit(cache=True)
def _check(i, j, x, M, add, mulc, p, cap, avec, astart, cnt, order):
    for ai in range(astart[i], astart[i + 1]):
        v = 0
        for r in range(i):
            v = add[v, mulc[avec[ai, r] + p - 1, M[r, j]]]
        v = add[v, mulc[avec[ai, i] + p - 1, x]]
        src = cnt[ai, j]
        dst = cnt[ai, j + 1]
        for g in range(order):
            dst[g] = 0
        for h in range(order):
            c = src[h]
            if c == 0:
                continue
            g = h
            for _t in range(p):
                dst[g] += c
                if dst[g] > cap:
                    return False
                g = add[g, v]
    return True


@njit(cache=True)
def _sym_ok(i, j, x, M, neg, flags, fixed_row0, strict):
    if i == 0:
        if fixed_row0:
            return True
        if flags & COLSORT and j > 0 and (x < M[0, j - 1] or (strict and x == M[0, j - 1])):
            return False
        if flags & COLNEG and x > neg[x]:
            return False
        return True
    if flags & ROWNEG and j == 0 and x > neg[x]:
        return False
    if flags & ROWSORT and i >= 2:
        for jj in range(j):
            if M[i, jj] != M[i - 1, jj]:
                return True
        if x < M[i - 1, j]:
            return False
    return True


@njit(cache=True)
def _shuffle(row, n):
    for t in range(n):
        row[t] = t
    for t in range(n - 1, 0, -1):
        u = np.random.randint(0, t + 1)
        row[t], row[u] = row[u], row[t]


@njit(cache=True)
def _kernel(add, mulc, neg, p, cap, k, w, avec, astart, flags, fixed, plo, phi,
            random_mode, seed, stop_at, count_all, sols, M, cand, perm, cnt, st):
    order = add.shape[0]
    last = k * w - 1
    has_fixed = fixed.shape[0] > 0
    first = w if has_fixed else 0
    if st[_INIT] == 0:
        st[_INIT] = 1
        for a in range(cnt.shape[0]):
            cnt[a, 0, 0] = 1
        if has_fixed:
            for j in range(w):
                M[0, j] = fixed[j]
                if not _check(0, j, fixed[j], M, add, mulc, p, cap, avec, astart, cnt, order):
                    return EXHAUSTED
            if first > last:
                sols[0, :, :] = M
                st[_NSOL] = 1
                return FOUND if not count_all else EXHAUSTED
        if random_mode:
            np.random.seed(seed)
            _shuffle(perm[first], order)
        st[_POS] = first
        cand[first] = -1 if random_mode else max(plo, 0) - 1
    pos = st[_POS]
    nodes = st[_NODES]
    status = RUNNING
    while True:
        if nodes >= stop_at:
            break
        i = pos // w
        j = pos - i * w
        idx = cand[pos] + 1
        if random_mode:
            if idx >= order:
                st[_RESTARTS] += 1
                pos = first
                _shuffle(perm[first], order)
                cand[first] = -1
                continue
            x = perm[pos, idx]
        else:
            hi = order
            if pos == first and phi < hi:
                hi = phi
            if idx >= hi:
                if pos == first:
                    status = EXHAUSTED
                    break
                pos -= 1
                continue
            x = idx
        cand[pos] = idx
        nodes += 1
        if not _sym_ok(i, j, x, M, neg, flags, has_fixed, cap == 1):
            continue
        if not _check(i, j, x, M, add, mulc, p, cap, avec, astart, cnt, order):
            continue
        M[i, j] = x
        if pos == last:
            n = st[_NSOL]
            if n < sols.shape[0]:
                sols[n, :, :] = M
            st[_NSOL] = n + 1
            if not count_all or random_mode:
                status = FOUND
                break
            continue
        pos += 1
        if random_mode:
            _shuffle(perm[pos], order)
            cand[pos] = -1
        else:
            nxt = 0
            if pos < w and flags & COLSORT and not has_fixed:
                nxt = M[0, pos - 1] + (1 if cap == 1 else 0)
            if pos == first and plo > nxt:
                nxt = plo
            cand[pos] = nxt - 1
    st[_POS] = pos
    st[_NODES] = nodes
    return status


# -- configuration ------------------------------------------------------------


class Mode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


class Outcome(str, Enum):
    FOUND = "found"
    EXHAUSTED_NONE = "exhausted_none"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Symmetry:
    column_sort: bool = True
    column_negation: bool = True
    row_negation: bool = True
    row_sort: bool = True
    first_row_canonical: bool = False

    @classmethod
    def none(cls) -> Symmetry:
        return cls(False, False, False, False, False)

    @property
    def flags(self) -> int:
        return ((COLSORT if self.column_sort else 0) | (COLNEG if self.column_negation else 0)
                | (ROWNEG if self.row_negation else 0) | (ROWSORT if self.row_sort else 0))

    def names(self) -> tuple[str, ...]:
        pairs = [("column_sort", self.column_sort), ("column_negation", self.column_negation),
                 ("row_negation", self.row_negation), ("row_sort", self.row_sort),
                 ("first_row_canonical", self.first_row_canonical)]
        return tuple(n for n, on in pairs if on)


@dataclass(frozen=True)
class SearchConfig:
    group: GroupSpec
    k: int
    s: int = 0
    mode: Mode = Mode.EXHAUSTIVE
    symmetry: Symmetry | None = None
    budget: int = DEFAULT_BUDGET
    time_limit: float | None = None
    seed: int = 0
    partitions: int = 1
    first_entry: tuple[int, int] | None = None
    count_all: bool = False
    max_solutions: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.symmetry is None:
            sym = Symmetry() if self.mode is Mode.EXHAUSTIVE else Symmetry.none()
            object.__setattr__(self, "symmetry", sym)
        if self.k < 1 or self.s < 0:
            raise StructuralError("need k >= 1 and s >= 0")
        if self.budget <= 0:
            raise StructuralError("budget must be positive")
        if self.partitions < 1:
            raise StructuralError("partitions must be at least 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise StructuralError("time limit must be positive")

    @property
    def restricted(self) -> bool:
        return self.symmetry.first_row_canonical


@dataclass
class SearchResult:
    outcome: Outcome
    matrix: ContractedDifferenceMatrix | None
    nodes_visited: int
    restrictions_applied: tuple[str, ...]
    seed: int | None
    solutions: int = 0
    solution_list: list[ContractedDifferenceMatrix] = field(default_factory=list)
    restarts: int = 0
    elapsed: float = 0.0

    @property
    def restricted(self) -> bool:
        return "first_row_canonical" in self.restrictions_applied

    @property
    def label(self) -> str:
        """How a nonexistence result may be quoted."""
        if self.outcome is not Outcome.EXHAUSTED_NONE:
            return self.outcome.value
        return "restricted_exhaustive" if self.restricted else "exhaustive"

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "label": self.label,
            "matrix": None if self.matrix is None else self.matrix.text_rows(),
            "nodes_visited": self.nodes_visited,
            "restrictions_applied": list(self.restrictions_applied),
            "seed": self.seed,
            "solutions": self.solutions,
            "restarts": self.restarts,
        }


# -- driver -------------------------------------------------------------------


@dataclass
class _Tables:
    add: np.ndarray
    mulc: np.ndarray
    neg: np.ndarray
    avec: np.ndarray
    astart: np.ndarray


def _tables(spec: GroupSpec, k: int) -> _Tables:
    p = spec.p
    add = spec.add_table().astype(np.int32)
    mulc = np.stack([spec.scalar_table(t) for t in range(-(p - 1), p)]).astype(np.int32)
    neg = spec.neg_table().astype(np.int32)
    vecs = coefficient_vectors(p, k)
    lastnz = np.array([max(i for i in range(k) if a[i]) for a in vecs], dtype=np.int64)
    order = np.argsort(lastnz, kind="stable")
    avec = np.ascontiguousarray(vecs[order]).astype(np.int32)
    astart = np.searchsorted(lastnz[order], np.arange(k + 1)).astype(np.int64)
    return _Tables(add, mulc, neg, avec, astart)


def first_feasible_row(spec: GroupSpec, s: int = 0) -> np.ndarray | None:
    """Lexicographically first row whose expansion covers ``G`` evenly."""
    res = _run(SearchConfig(spec, 1, s, symmetry=Symmetry.none()), fixed=None)
    return None if res.matrix is None else res.matrix.indices[0]


def _run(cfg: SearchConfig, fixed: np.ndarray | None) -> SearchResult:
    G, k, s = cfg.group, cfg.k, cfg.s
    w = G.n + s
    t = _tables(G, k)
    order = G.order
    M = np.zeros((k, w), dtype=np.int32)
    cand = np.zeros(k * w, dtype=np.int64)
    rnd = cfg.mode is Mode.RANDOM
    perm = np.zeros((k * w, order) if rnd else (1, 1), dtype=np.int32)
    cnt = np.zeros((t.avec.shape[0], w + 1, order), dtype=np.int32)
    st = np.zeros(5, dtype=np.int64)
    nbuf = max(1, cfg.max_solutions)
    sols = np.zeros((nbuf, k, w), dtype=np.int32)
    fx = np.zeros(0, dtype=np.int32) if fixed is None else np.asarray(fixed, dtype=np.int32)
    plo, phi = cfg.first_entry if cfg.first_entry else (0, order)
    start = time.perf_counter()
    status = RUNNING
    while status == RUNNING:
        stop = min(cfg.budget, int(st[_NODES]) + CHUNK)
        status = _kernel(t.add, t.mulc, t.neg, G.p, G.p**s, k, w, t.avec, t.astart,
                         cfg.symmetry.flags, fx, plo, phi, rnd, cfg.seed, stop,
                         cfg.count_all, sols, M, cand, perm, cnt, st)
        if status != RUNNING:
            break
        if st[_NODES] >= cfg.budget:
            break
        if cfg.time_limit is not None and time.perf_counter() - start > cfg.time_limit:
            break
    nsol = int(st[_NSOL])
    found = [_to_cdm(G, s, sols[i]) for i in range(min(nsol, nbuf))]
    if status == FOUND or (status == EXHAUSTED and nsol):
        outcome = Outcome.FOUND
    elif status == EXHAUSTED:
        outcome = Outcome.EXHAUSTED_NONE
    else:
        outcome = Outcome.BUDGET_EXCEEDED
    restrictions = cfg.symmetry.names()
    return SearchResult(outcome, found[0] if found else None, int(st[_NODES]), restrictions,
                        cfg.seed if rnd else None, nsol, found, int(st[_RESTARTS]),
                        time.perf_counter() - start)


def _to_cdm(G: GroupSpec, s: int, idx: np.ndarray) -> ContractedDifferenceMatrix:
    M = ContractedDifferenceMatrix(G, s, G.decode(idx.astype(np.int64)))
    if not verify_cdm_fast(M):
        raise AssertionError("search produced a matrix that fails verification")
    return M


def _single(cfg: SearchConfig) -> SearchResult:
    G = cfg.group
    if cfg.k > G.n + cfg.s:
        # more rows than columns is impossible: the expansion would beat the row bound
        return SearchResult(Outcome.EXHAUSTED_NONE, None, 0, cfg.symmetry.names() + ("row_bound",),
                            cfg.seed if cfg.mode is Mode.RANDOM else None)
    fixed = None
    if cfg.symmetry.first_row_canonical:
        fixed = first_feasible_row(G, cfg.s)
        if fixed is None:
            return SearchResult(Outcome.EXHAUSTED_NONE, None, 0, cfg.symmetry.names(), None)
    return _run(cfg, fixed)


def partition_space(config: SearchConfig, parts: int) -> list[SearchConfig]:
    """Split the values of the first free entry into ``parts`` contiguous ranges."""
    if parts < 1:
        raise StructuralError("parts must be at least 1")
    if parts == 1:
        return [config]
    lo, hi = config.first_entry or (0, config.group.order)
    parts = min(parts, max(1, hi - lo))
    cuts = [lo + (hi - lo) * i // parts for i in range(parts + 1)]
    return [replace(config, first_entry=(cuts[i], cuts[i + 1]), partitions=1) for i in range(parts)]


def merge_results(results: Sequence[SearchResult]) -> SearchResult:
    """Combine results of disjoint parts listed in search order."""
    if not results:
        raise StructuralError("nothing to merge")
    nodes, sols, found, restarts, elapsed = 0, 0, [], 0, 0.0
    outcome = Outcome.EXHAUSTED_NONE
    for r in results:
        nodes += r.nodes_visited
        sols += r.solutions
        found.extend(r.solution_list)
        restarts += r.restarts
        elapsed += r.elapsed
        if r.outcome is Outcome.FOUND:
            outcome = Outcome.FOUND
        elif r.outcome is Outcome.BUDGET_EXCEEDED and outcome is not Outcome.FOUND:
            outcome = Outcome.BUDGET_EXCEEDED
    first = results[0]
    return SearchResult(outcome, found[0] if found else None, nodes, first.restrictions_applied,
                        first.seed, sols, found, restarts, elapsed)


def search_cdm(config: SearchConfig, workers: int = 1) -> SearchResult:
    """Run a search, split across ``config.partitions`` parts.

    Parts run in order; unless all solutions are requested, the first part
    that finds a matrix ends the run, so outcome and node count do not depend
    on the number of parts.
    """
    parts = partition_space(config, config.partitions) if config.mode is Mode.EXHAUSTIVE else [config]
    if len(parts) == 1:
        return _single(parts[0])
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_single, parts))
        if not config.count_all:
            for i, r in enumerate(results):
                if r.outcome is Outcome.FOUND:
                    results = results[: i + 1]
                    break
        return merge_results(results)
    results, spent = [], 0
    for part in parts:
        remaining = config.budget - spent
        if remaining <= 0:
            results.append(SearchResult(Outcome.BUDGET_EXCEEDED, None, 0, part.symmetry.names(), None))
            break
        r = _single(replace(part, budget=remaining))
        results.append(r)
        spent += r.nodes_visited
        if r.outcome is Outcome.FOUND and not config.count_all:
            break
        if r.outcome is Outcome.BUDGET_EXCEEDED:
            break
    return merge_results(results)


def canonical_form(M: ContractedDifferenceMatrix) -> np.ndarray:
    """Bring ``M`` into the shape the symmetry reductions search over.

    Negate columns so row 0 entries are minimal, sort columns by row 0,
    negate later rows so their first entries are minimal, then sort them.
    The result always passes the reductions, but it is not an orbit
    invariant: negating a column whose row 0 entry is its own negative
    leaves row 0 alone and can give a different normal form.
    """
    G = M.group
    neg = G.neg_table()
    X = M.indices.copy()
    for j in range(X.shape[1]):
        if neg[X[0, j]] < X[0, j]:
            X[:, j] = neg[X[:, j]]
    X = X[:, np.argsort(X[0], kind="stable")]
    for i in range(1, X.shape[0]):
        if neg[X[i, 0]] < X[i, 0]:
            X[i] = neg[X[i]]
    rest = sorted(map(tuple, X[1:].tolist()))
    return np.array([X[0].tolist()] + [list(r) for r in rest], dtype=np.int64).reshape(X.shape)
