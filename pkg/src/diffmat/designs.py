"""Difference matrices, contracted difference matrices and their verifiers.

Both design types store their entries as an integer array of shape
``(rows, cols, rank)`` of coordinates against the group's factor list.  The
``verified`` flag is set only by :func:`verify_dm`, :func:`verify_cdm_fast`
and :func:`verify_cdm_full`; operations that provably preserve the property
(row deletion, normalization) carry it over.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, StructuralError
from .groups import ENUMERATION_CAP, GroupElement, GroupSpec, format_coords

EXPANSION_CAP = 2**24


def _as_entries(group: GroupSpec, rows) -> np.ndarray:
    """Coerce nested rows of elements, coordinate tuples or strings."""
    if isinstance(rows, np.ndarray):
        arr = rows.astype(np.int64)
        if arr.ndim == 2 and group.rank == 1:
            arr = arr[..., None]
        if arr.ndim != 3 or arr.shape[2] != group.rank:
            raise StructuralError(f"entry array has shape {arr.shape}, rank is {group.rank}")
        return group.reduce(arr) if group.rank else arr
    rows = list(rows)
    if not rows:
        raise StructuralError("a design needs at least one row")
    out = []
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, GroupElement):
                if x.group != group:
                    raise StructuralError(f"entry {x} is not in {group}")
                cells.append(x.coords)
            elif isinstance(x, str):
                cells.append(group.element(x).coords)
            elif isinstance(x, (int, np.integer)) and group.rank == 1:
                cells.append((int(x),))
            else:
                cells.append(group.element(x).coords)
        out.append(cells)
    width = {len(r) for r in out}
    if len(width) != 1:
        raise StructuralError("rows have different lengths")
    arr = np.array(out, dtype=np.int64).reshape(len(out), width.pop(), group.rank)
    return arr


class _Design:
    group: GroupSpec
    entries: np.ndarray
    verified: bool

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[0], self.entries.shape[1]

    @property
    def nrows(self) -> int:
        return self.entries.shape[0]

    @property
    def ncols(self) -> int:
        return self.entries.shape[1]

    @property
    def indices(self) -> np.ndarray:
        """Entries as element indices, shape ``(rows, cols)``."""
        return self.group.encode(self.entries)

    def entry(self, i: int, j: int) -> GroupElement:
        return GroupElement(self.group, tuple(int(c) for c in self.entries[i, j]))

    def row(self, i: int) -> list[GroupElement]:
        return [self.entry(i, j) for j in range(self.ncols)]

    @property
    def rows(self) -> list[list[GroupElement]]:
        return [self.row(i) for i in range(self.nrows)]

    def coord_rows(self) -> list[list[list[int]]]:
        return self.entries.tolist()

    def text_rows(self) -> list[list[str]]:
        return [[format_coords(c) for c in row] for row in self.entries.tolist()]

    def __str__(self) -> str:
        return "\n".join(" ".join(r) for r in self.text_rows())


@dataclass(eq=False)
class DifferenceMatrix(_Design):
    group: GroupSpec
    lam: int
    entries: np.ndarray
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        self.entries = _as_entries(self.group, self.entries)
        if self.lam < 1:
            raise StructuralError("lambda must be positive")
        if self.nrows < 1:
            raise StructuralError("a difference matrix needs at least one row")
        if self.ncols != self.lam * self.group.order:
            raise StructuralError(
                f"a ({self.group}, m, {self.lam}) matrix needs {self.lam * self.group.order} "
                f"columns, got {self.ncols}")

    @classmethod
    def from_rows(cls, group: GroupSpec, lam: int, rows) -> DifferenceMatrix:
        return cls(group, lam, _as_entries(group, rows))

    @property
    def m(self) -> int:
        return self.nrows

    def __eq__(self, other) -> bool:
        return (isinstance(other, DifferenceMatrix) and self.group == other.group
                and self.lam == other.lam and np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        return f"DifferenceMatrix({self.group}, m={self.m}, lam={self.lam}, verified={self.verified})"


@dataclass(eq=False)
class ContractedDifferenceMatrix(_Design):
    group: GroupSpec
    s: int
    entries: np.ndarray
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        self.entries = _as_entries(self.group, self.entries)
        if self.s < 0:
            raise StructuralError("s must be nonnegative")
        if self.nrows < 1:
            raise StructuralError("a contracted matrix needs at least one row")
        if self.ncols != self.group.n + self.s:
            raise StructuralError(
                f"a ({self.group}, k, {self.s}) contracted matrix needs {self.group.n + self.s} "
                f"columns, got {self.ncols}")

    @classmethod
    def from_rows(cls, group: GroupSpec, s: int, rows) -> ContractedDifferenceMatrix:
        return cls(group, s, _as_entries(group, rows))

    @property
    def k(self) -> int:
        return self.nrows

    def __eq__(self, other) -> bool:
        return (isinstance(other, ContractedDifferenceMatrix) and self.group == other.group
                and self.s == other.s and np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        return (f"ContractedDifferenceMatrix({self.group}, k={self.k}, s={self.s}, "
                f"verified={self.verified})")


# -- witnesses ----------------------------------------------------------------


@dataclass(frozen=True)
class DMWitness:
    """Rows ``i, j`` whose difference hits ``element`` ``multiplicity`` times."""

    rows: tuple[int, int]
    element: tuple[int, ...]
    multiplicity: int
    expected: int

    def __str__(self) -> str:
        return (f"rows {self.rows}: difference {format_coords(self.element)} occurs "
                f"{self.multiplicity} times, expected {self.expected}")


@dataclass(frozen=True)
class BilinearWitness:
    """Nonzero ``a``, ``b`` with ``a M b^T = 0``."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __str__(self) -> str:
        return f"a={list(self.a)} b={list(self.b)} gives a M b^T = 0"


@dataclass(frozen=True)
class CoverWitness:
    """Nonzero ``a`` for which ``a M c^T`` hits ``element`` the wrong number of times."""

    a: tuple[int, ...]
    element: tuple[int, ...]
    multiplicity: int
    expected: int

    def __str__(self) -> str:
        return (f"a={list(self.a)}: {format_coords(self.element)} occurs {self.multiplicity} "
                f"times, expected {self.expected}")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "true" if self.ok else f"false ({self.witness})"


# -- expansion ----------------------------------------------------------------


@lru_cache(maxsize=64)
def zp_vectors(p: int, d: int) -> np.ndarray:
    """All of ``Z_p^d`` in lexicographic order, first coordinate most significant."""
    if p**d > ENUMERATION_CAP:
        raise CapacityError(f"{p}^{d} vectors exceed the enumeration cap")
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(p)] * d), indexing="ij")
    out = np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


def _raw_entries(M) -> tuple[GroupSpec, np.ndarray]:
    if isinstance(M, _Design):
        return M.group, M.entries
    group, arr = M
    return group, _as_entries(group, arr)


def p_expand(M, s: int | None = None) -> DifferenceMatrix:
    """The ``p^k x p^(n+s)`` matrix of bilinear products ``r M c^T``."""
    group, ent = _raw_entries(M)
    k, w = ent.shape[:2]
    if s is None:
        s = M.s if isinstance(M, ContractedDifferenceMatrix) else w - group.n
    if w != group.n + s:
        raise StructuralError(f"expected {group.n + s} columns, got {w}")
    p = group.p
    if p ** (k + w) > EXPANSION_CAP:
        raise CapacityError(f"expansion of a {k}x{w} matrix exceeds the cap")
    R, C = zp_vectors(p, k), zp_vectors(p, w)
    T = np.einsum("ri,ijx->rjx", R, ent) % group.moduli
    E = np.einsum("rjx,cj->rcx", T, C) % group.moduli
    return DifferenceMatrix(group, p**s, E)


# -- verification -------------------------------------------------------------


def verify_dm(A: DifferenceMatrix, lam: int | None = None) -> Verdict:
    """Every pair of distinct rows differs by each element exactly ``lam`` times."""
    lam = A.lam if lam is None else lam
    G = A.group
    if A.ncols != lam * G.order:
        raise StructuralError(f"{A.ncols} columns do not match lambda={lam} and |G|={G.order}")
    G._check_cap(None)
    ent = A.entries
    v = G.order
    for i in range(A.nrows - 1):
        rest = ent[i + 1:]
        diff = G.encode(ent[i][None] - rest)
        offs = diff + (np.arange(rest.shape[0]) * v)[:, None]
        counts = np.bincount(offs.reshape(-1), minlength=rest.shape[0] * v).reshape(-1, v)
        bad = np.argwhere(counts != lam)
        if bad.size:
            r, g = bad[0]
            res = Verdict(False, DMWitness((i, i + 1 + int(r)), tuple(G.decode(g).tolist()),
                                           int(counts[r, g]), lam))
            return res
    A.verified = True
    return Verdict(True)


@lru_cache(maxsize=64)
def coefficient_vectors(p: int, k: int, halve: bool = True) -> np.ndarray:
    """Nonzero vectors in ``{-(p-1), ..., p-1}^k``.

    With ``halve`` only one of ``a`` and ``-a`` is kept (the one whose first
    nonzero entry is positive); the cover condition is symmetric under
    negation so nothing is lost.
    """
    rng = range(-(p - 1), p)
    vecs = [a for a in product(rng, repeat=k) if any(a)]
    if halve:
        vecs = [a for a in vecs if next(x for x in a if x) > 0]
    out = np.array(vecs, dtype=np.int64).reshape(len(vecs), k)
    out.setflags(write=False)
    return out


def verify_cdm_fast(M: ContractedDifferenceMatrix, s: int | None = None) -> Verdict:
    """Check the contracted condition directly on ``M``.

    For each nonzero integer vector ``a`` with entries in ``(-p, p)`` the
    vector ``v = a M`` must make ``c -> sum c_j v_j`` over ``c in Z_p^(n+s)``
    hit every element exactly ``p^s`` times.  For ``s = 0`` this map is a
    bijection, and a collision ``c1, c2`` gives ``a M b^T = 0`` with
    ``b = c1 - c2``.
    """
    s = M.s if s is None else s
    G = M.group
    ent = M.entries
    k, w = ent.shape[:2]
    if w != G.n + s:
        raise StructuralError(f"expected {G.n + s} columns, got {w}")
    p = G.p
    if p**w > ENUMERATION_CAP:
        raise CapacityError(f"p^{w} column combinations exceed the cap")
    C = zp_vectors(p, w)
    target = p**s
    mods = G.moduli
    for a in coefficient_vectors(p, k):
        v = np.einsum("i,ijx->jx", a, ent) % mods
        idx = G.encode(C @ v)
        counts = np.bincount(idx, minlength=G.order)
        if counts.max() != target or counts.min() != target:
            if s == 0:
                g = int(np.argmax(counts))
                c1, c2 = np.flatnonzero(idx == g)[:2]
                b = tuple((C[c2] - C[c1]).tolist())
                wit = BilinearWitness(tuple(a.tolist()), b)
            else:
                g = int(np.flatnonzero(counts != target)[0])
                wit = CoverWitness(tuple(a.tolist()), tuple(G.decode(g).tolist()),
                                   int(counts[g]), target)
            return Verdict(False, wit)
    M.verified = True
    return Verdict(True)


def verify_cdm_full(M: ContractedDifferenceMatrix, s: int | None = None) -> Verdict:
    s = M.s if s is None else s
    res = verify_dm(p_expand(M, s))
    if res:
        M.verified = True
    return res


def verify(design) -> Verdict:
    if isinstance(design, DifferenceMatrix):
        return verify_dm(design)
    return verify_cdm_fast(design)


# -- normalization and small constructions ------------------------------------


def normalize_dm(A: DifferenceMatrix) -> DifferenceMatrix:
    """Translate columns by ``-a_0j`` then rows by ``-a_i0``."""
    E = A.entries - A.entries[0:1, :, :]
    E = E - E[:, 0:1, :]
    out = DifferenceMatrix(A.group, A.lam, A.group.reduce(E))
    out.verified = A.verified
    return out


def is_normalized(A: DifferenceMatrix) -> bool:
    return not A.entries[0].any() and not A.entries[:, 0].any()


def trivial_dm(spec: GroupSpec, lam: int = 1) -> DifferenceMatrix:
    """Identity row over ``lam`` copies of the element enumeration."""
    if lam < 1:
        raise StructuralError("lambda must be positive")
    row = np.tile(spec.coords_table(), (lam, 1))
    return DifferenceMatrix(spec, lam, np.stack([np.zeros_like(row), row]))


def trivial_cdm(spec: GroupSpec, s: int = 0) -> ContractedDifferenceMatrix:
    """The single row ``e_1, p e_1, ..., e_2, p e_2, ...`` padded with ``s`` zeros."""
    if s < 0:
        raise StructuralError("s must be nonnegative")
    cells = []
    for i, a in enumerate(spec.exponents):
        for t in range(a):
            c = [0] * spec.rank
            c[i] = spec.p**t
            cells.append(c)
    cells += [[0] * spec.rank] * s
    return ContractedDifferenceMatrix(spec, s, np.array([cells], dtype=np.int64).reshape(1, -1, spec.rank))


def delete_rows(design, indices: Iterable[int]):
    """Drop the listed rows; the verified flag survives since rows only disappear."""
    drop = set(int(i) for i in indices)
    keep = [i for i in range(design.nrows) if i not in drop]
    if not keep:
        raise StructuralError("cannot delete every row")
    if isinstance(design, DifferenceMatrix):
        out = DifferenceMatrix(design.group, design.lam, design.entries[keep])
    else:
        out = ContractedDifferenceMatrix(design.group, design.s, design.entries[keep])
    out.verified = design.verified
    return out


def truncate_rows(design, k: int):
    return delete_rows(design, range(k, design.nrows))


# -- bounds -------------------------------------------------------------------


def max_rows_bound(spec: GroupSpec, lam: int = 1) -> int:
    return lam * spec.order


def sylow2_obstruction(spec: GroupSpec, lam: int = 1) -> bool:
    """True when no 3-row matrix can exist: odd ``lam`` and nontrivial cyclic Sylow 2-subgroup."""
    return lam % 2 == 1 and spec.p == 2 and spec.rank == 1


def elem_ab_feasible(p: int, n: int, s: int, k: int | None = None, m: int | None = None) -> bool:
    """Existence over ``Z_p^n``: contracted ``k <= n + s`` or plain ``m <= p^(n+s)``."""
    if (k is None) == (m is None):
        raise StructuralError("give exactly one of k or m")
    if k is not None:
        return 1 <= k <= n + s
    return 1 <= m <= p ** (n + s)


def check_same_rows(designs: Sequence[_Design]):
    if len({d.nrows for d in designs}) != 1:
        raise StructuralError("designs have different row counts")
