"""Difference sets and reduced linking systems built from difference matrices.

Group-ring elements are dense coefficient vectors over the element
enumeration of the host group; products of two sets are accumulated pair by
pair through the addition table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .designs import DifferenceMatrix, _as_entries, is_normalized, normalize_dm, verify_dm
from .errors import StructuralError
from .groups import DiagonalSubgroup, GroupElement, GroupSpec

GENERATOR_NAMES = "xyzuvwrst"


def hadamard_params(d: int) -> tuple[int, int, int, int]:
    """``(2^(2d+2), 2^d (2^(d+1) - 1), 2^d (2^d - 1), 2^(2d))``."""
    if d < 1:
        raise StructuralError("d must be at least 1")
    return 2 ** (2 * d + 2), 2**d * (2 ** (d + 1) - 1), 2**d * (2**d - 1), 2 ** (2 * d)


@dataclass(frozen=True)
class DifferenceSet:
    group: GroupSpec
    indices: tuple[int, ...]
    params: tuple[int, int, int, int]

    @classmethod
    def from_indices(cls, group: GroupSpec, idx, params=None) -> DifferenceSet:
        idx = tuple(sorted({int(i) for i in idx}))
        if params is None:
            v, k = group.order, len(idx)
            lam = k * (k - 1) // (v - 1) if v > 1 else 0
            params = (v, k, lam, k - lam)
        return cls(group, idx, tuple(params))

    @property
    def elements(self) -> list[GroupElement]:
        coords = self.group.decode(np.array(self.indices, dtype=np.int64))
        return [GroupElement(self.group, tuple(int(c) for c in row)) for row in coords]

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, g: GroupElement) -> bool:
        return self.group.index(g) in set(self.indices)


@dataclass(frozen=True)
class SetWitness:
    element: tuple[int, ...]
    coefficient: int
    expected: int

    def __str__(self) -> str:
        return f"coefficient {self.coefficient} at {self.element}, expected {self.expected}"


@dataclass(frozen=True)
class SetVerdict:
    ok: bool
    witness: SetWitness | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def group_ring_product(G: GroupSpec, A: Sequence[int], B: Sequence[int]) -> np.ndarray:
    """Coefficients of ``sum_{a in A} a * sum_{b in B} (-b)``."""
    add = G.add_table()
    neg = G.neg_table()
    A = np.asarray(A, dtype=np.int64)
    B = neg[np.asarray(B, dtype=np.int64)]
    return np.bincount(add[np.ix_(A, B)].reshape(-1), minlength=G.order)


def verify_difference_set(D: DifferenceSet, params: tuple[int, int, int, int] | None = None) -> SetVerdict:
    """Autocorrelation is ``k`` at the identity and ``lambda`` elsewhere."""
    v, k, lam, n = D.params if params is None else params
    G = D.group
    if G.order != v:
        return SetVerdict(False, reason=f"group order {G.order} is not v={v}")
    if len(D) != k:
        return SetVerdict(False, reason=f"set has {len(D)} elements, not k={k}")
    if n != k - lam:
        return SetVerdict(False, reason=f"n={n} is not k - lambda")
    c = group_ring_product(G, D.indices, D.indices)
    want = np.full(G.order, lam, dtype=np.int64)
    want[0] = k
    bad = np.flatnonzero(c != want)
    if bad.size:
        g = int(bad[0])
        return SetVerdict(False, SetWitness(tuple(G.decode(g).tolist()), int(c[g]), int(want[g])),
                          "autocorrelation is not constant off the identity")
    return SetVerdict(True)


def hyperplane_subgroups(E: DiagonalSubgroup) -> list[np.ndarray]:
    """Kernels of the nonzero functionals on ``E``, as sorted host indices.

    Functionals are taken in lexicographic order of their coefficient vectors
    with respect to the canonical coordinates of ``E``.
    """
    S = E.subgroup
    if S.p != 2 or not S.is_elementary_abelian:
        raise StructuralError(f"E = {S} is not an elementary abelian 2-group")
    pts = S.coords_table()
    host = E.embed_coords(pts)
    out = []
    for phi in pts[1:]:
        ker = (pts @ phi) % 2 == 0
        out.append(np.sort(E.host.encode(host[ker])))
    return out


@dataclass
class LinkingSystem:
    group: GroupSpec
    sets: list[DifferenceSet]
    params: tuple[int, int, int, int]
    mu: int | None = None
    nu: int | None = None
    cosets: list[list[tuple[tuple[int, ...], int]]] = field(default_factory=list)
    normalized_input: bool = False

    def __len__(self) -> int:
        return len(self.sets)

    def to_json(self) -> dict:
        v, k, lam, n = self.params
        return {
            "group": self.group.to_json(),
            "params": {"v": v, "k": k, "lambda": lam, "n": n},
            "mu": self.mu,
            "nu": self.nu,
            "normalized_input": self.normalized_input,
            "sets": [[list(map(int, row)) for row in self.group.decode(np.array(D.indices)).tolist()]
                     for D in self.sets],
        }

    @classmethod
    def from_json(cls, data: dict) -> LinkingSystem:
        G = GroupSpec.parse(data["group"])
        p = data["params"]
        params = (p["v"], p["k"], p["lambda"], p["n"])
        sets = [DifferenceSet.from_indices(G, G.encode(np.array(s, dtype=np.int64).reshape(-1, G.rank)), params)
                for s in data["sets"]]
        return cls(G, sets, params, data.get("mu"), data.get("nu"),
                   normalized_input=bool(data.get("normalized_input", False)))


def _coerce_E(G: GroupSpec, E) -> DiagonalSubgroup:
    if isinstance(E, DiagonalSubgroup):
        if E.host != G:
            raise StructuralError("E lives in a different group")
        return E
    return DiagonalSubgroup(G, tuple(E))


def build_linking_system(G: GroupSpec, E, dm: DifferenceMatrix, e_choices=None,
                         seed: int | None = None) -> LinkingSystem:
    """``D_i = union_j (b_ij + e_ij + H_j)`` for rows ``1..m-1`` of the normalized ``dm``.

    ``E`` is a :class:`DiagonalSubgroup` (or its cofactors) whose subgroup is
    elementary abelian of rank ``d + 1``; ``dm`` is a ``(G/E, m, 1)`` matrix.
    ``e_choices`` is an ``(m-1) x (2^(d+1)-1)`` array of elements of ``E``;
    without it every ``e_ij`` is the identity, unless ``seed`` asks for random ones.
    """
    E = _coerce_E(G, E)
    S = E.subgroup
    d = S.n - 1
    if S.p != 2 or not S.is_elementary_abelian or d < 1:
        raise StructuralError(f"E = {S} must be Z_2^(d+1) with d >= 1")
    v, k, lam, n = hadamard_params(d)
    if G.order != v:
        raise StructuralError(f"|G| = {G.order} but d = {d} needs {v}")
    if dm.group != E.quotient:
        raise StructuralError(f"matrix is over {dm.group}, expected G/E = {E.quotient}")
    if dm.lam != 1:
        raise StructuralError("need a matrix with lambda = 1")
    if not dm.verified and not verify_dm(dm):
        raise StructuralError("the input matrix is not a difference matrix")
    was_normal = is_normalized(dm)
    A = dm if was_normal else normalize_dm(dm)
    hyps = hyperplane_subgroups(E)
    s = len(hyps)
    m = A.nrows
    if A.ncols != s + 1:
        raise StructuralError("column count does not match the hyperplanes of E")
    if e_choices is None and seed is not None:
        rng = np.random.default_rng(seed)
        pts = S.coords_table()
        e = E.embed_coords(pts[rng.integers(0, len(pts), size=(m - 1, s))])
    elif e_choices is None:
        e = np.zeros((m - 1, s, G.rank), dtype=np.int64)
    else:
        e = _as_entries(G, e_choices)
        if e.shape[:2] != (m - 1, s):
            raise StructuralError(f"e_choices must be {m - 1} x {s}")
        if E.project_coords(e).any():
            raise StructuralError("every e_ij must lie in E")
    b = E.rep_coords(A.entries[1:, 1:])
    shift = G.reduce(b + e)
    add = G.add_table()
    sets, cosets = [], []
    for i in range(m - 1):
        idx, reps = [], []
        for j in range(s):
            t = int(G.encode(shift[i, j]))
            idx.append(add[t, hyps[j]])
            reps.append((tuple(int(x) for x in shift[i, j]), j + 1))
        sets.append(DifferenceSet.from_indices(G, np.concatenate(idx), (v, k, lam, n)))
        cosets.append(reps)
    return LinkingSystem(G, sets, (v, k, lam, n), cosets=cosets, normalized_input=not was_normal)


class LinkingFailure(str, Enum):
    MEMBER = "member_not_difference_set"
    VALUES = "coefficient_values"
    LEVEL = "level_set_size"
    AMBIGUOUS = "ambiguous_level_sets"
    LEVEL_DS = "level_set_not_difference_set"
    CONSTANTS = "inconsistent_constants"
    SIZE = "too_few_sets"


@dataclass(frozen=True)
class PairReport:
    i: int
    j: int
    mu: int | None
    nu: int | None
    level_set: tuple[int, ...] = ()
    failure: LinkingFailure | None = None
    detail: str = ""


@dataclass
class LinkingReport:
    ok: bool
    mu: int | None
    nu: int | None
    pairs: list[PairReport]
    failure: LinkingFailure | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _pair(sys_: LinkingSystem, i: int, j: int) -> PairReport:
    G = sys_.group
    k = sys_.params[1]
    c = group_ring_product(G, sys_.sets[i].indices, sys_.sets[j].indices)
    vals, counts = np.unique(c, return_counts=True)
    if len(vals) != 2:
        return PairReport(i, j, None, None, failure=LinkingFailure.VALUES,
                          detail=f"coefficients take values {vals.tolist()}")
    hits = [t for t in range(2) if counts[t] == k]
    if not hits:
        return PairReport(i, j, None, None, failure=LinkingFailure.LEVEL,
                          detail=f"level sets have sizes {counts.tolist()}, neither is k={k}")
    if len(hits) == 2:
        return PairReport(i, j, None, None, failure=LinkingFailure.AMBIGUOUS,
                          detail="both level sets have size k")
    t = hits[0]
    mu, nu = int(vals[t]), int(vals[1 - t])
    level = tuple(int(g) for g in np.flatnonzero(c == mu))
    D = DifferenceSet.from_indices(G, level, sys_.params)
    verdict = verify_difference_set(D)
    if not verdict:
        return PairReport(i, j, mu, nu, level, LinkingFailure.LEVEL_DS, str(verdict.witness or verdict.reason))
    return PairReport(i, j, mu, nu, level)


def verify_linking(system: LinkingSystem) -> LinkingReport:
    """Check the group-ring identity for every ordered pair of distinct members."""
    if len(system.sets) < 2:
        return LinkingReport(False, None, None, [], LinkingFailure.SIZE, "need at least two sets")
    for idx, D in enumerate(system.sets):
        verdict = verify_difference_set(D, system.params)
        if not verdict:
            return LinkingReport(False, None, None, [], LinkingFailure.MEMBER,
                                 f"set {idx}: {verdict.witness or verdict.reason}")
    reports = []
    consts = None
    for i in range(len(system.sets)):
        for j in range(len(system.sets)):
            if i == j:
                continue
            r = _pair(system, i, j)
            reports.append(r)
            if r.failure is not None:
                return LinkingReport(False, None, None, reports, r.failure, f"pair ({i},{j}): {r.detail}")
            if consts is None:
                consts = (r.mu, r.nu)
            elif consts != (r.mu, r.nu):
                return LinkingReport(False, None, None, reports, LinkingFailure.CONSTANTS,
                                     f"pair ({i},{j}) has {(r.mu, r.nu)}, earlier pairs {consts}")
    system.mu, system.nu = consts
    return LinkingReport(True, consts[0], consts[1], reports)


# -- multiplicative rendering -------------------------------------------------


def render_multiplicative(G: GroupSpec, coords: Sequence[int]) -> str:
    """``(3,1,0)`` in ``Z4xZ2xZ2`` becomes ``x^3y``; the identity is ``1``."""
    if G.rank > len(GENERATOR_NAMES):
        raise StructuralError("too many factors to name")
    out = []
    for name, c, q in zip(GENERATOR_NAMES, coords, G.orders):
        c = int(c) % q
        if c == 1:
            out.append(name)
        elif c:
            out.append(f"{name}^{c}")
    return "".join(out) or "1"


def render_cosets(system: LinkingSystem) -> list[str]:
    """One line per member, e.g. ``x H_1 ∪ y H_2 ∪ xy H_3``."""
    lines = []
    for reps in system.cosets:
        parts = [f"{render_multiplicative(system.group, r)} H_{j}" for r, j in reps]
        lines.append(" ∪ ".join(parts))
    return lines
