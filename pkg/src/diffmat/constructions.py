"""Constructions of difference matrices and contracted difference matrices.

Quotient matrices are lifted to the host group with the canonical coset
representatives of :class:`~diffmat.groups.DiagonalSubgroup`; subgroup
matrices are pushed forward with ``embed``.  Every operation that combines
designs insists on verified inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .designs import (ContractedDifferenceMatrix, DifferenceMatrix, delete_rows, p_expand,
                      trivial_cdm, verify_cdm_fast, verify_dm)
from .errors import StructuralError, UnsupportedError, VerificationError
from .gf import find_primitive_poly, FieldSpec
from .groups import DiagonalSubgroup, GroupSpec, Homomorphism


SEARCHED_CDMS: dict[tuple[int, ...], list[str]] = {
    (2, 1, 1): ["001 010 100 200",
                "010 201 001 100",
                "211 100 201 210"],
    (2, 2, 1): ["001 010 020 100 200",
                "021 001 211 010 100",
                "220 101 200 210 320"],
    (2, 1, 1, 1): ["0001 0010 0100 1000 2000",
                   "0010 0100 2001 0001 1000",
                   "1001 2110 0001 0010 0101"],
    (3, 1, 1, 1): ["4101 2000 1100 0010 7111 0101",
                   "4010 0111 2011 4001 7001 0001",
                   "4000 7110 5100 0011 5010 2011"],
}
"""The four (G, 3, 0) matrices over 2-groups found by computer search."""


def _require_verified(*designs):
    for d in designs:
        if not d.verified:
            raise VerificationError(f"{d!r} must be verified before it is composed")


def _from_text(group: GroupSpec, rows: Sequence[str], s: int = 0) -> ContractedDifferenceMatrix:
    return ContractedDifferenceMatrix.from_rows(group, s, [r.split() for r in rows])


def searched_cdm(spec: GroupSpec) -> ContractedDifferenceMatrix:
    if spec.p != 2 or spec.exponents not in SEARCHED_CDMS:
        raise UnsupportedError(f"no searched (G,3,0) matrix is stored for {spec}")
    return _from_text(spec, SEARCHED_CDMS[spec.exponents])


# -- finite field tables ------------------------------------------------------


def _field(p: int, n: int, fld: FieldSpec | None) -> FieldSpec:
    fld = fld or find_primitive_poly(p, n)
    if (fld.p, fld.n) != (p, n):
        raise StructuralError(f"field {fld} does not match GF({p}^{n})")
    return fld


def drake_dm(p: int, n: int, fld: FieldSpec | None = None) -> DifferenceMatrix:
    """Additive multiplication table of GF(p^n), indexed 0, 1, a, a^2, ..."""
    fld = _field(p, n, fld)
    q = fld.q
    pw = fld.power_coords
    ent = np.zeros((q, q, n), dtype=np.int64)
    for i in range(q - 1):
        for j in range(q - 1):
            ent[i + 1, j + 1] = pw[(i + j) % (q - 1)]
    return DifferenceMatrix(fld.additive_group, 1, ent)


def contracted_field_cdm(p: int, n: int, fld: FieldSpec | None = None) -> ContractedDifferenceMatrix:
    """``(i, j)`` entry ``a^(i+j)`` for ``0 <= i, j < n``."""
    fld = _field(p, n, fld)
    pw = fld.power_coords
    ent = np.array([[pw[(i + j) % (fld.q - 1)] for j in range(n)] for i in range(n)], dtype=np.int64)
    return ContractedDifferenceMatrix(fld.additive_group, 0, ent.reshape(n, n, n))


# -- homomorphic images -------------------------------------------------------


def hom_image_dm(A: DifferenceMatrix, phi: Homomorphism) -> DifferenceMatrix:
    _require_verified(A)
    if phi.source != A.group:
        raise StructuralError(f"homomorphism source {phi.source} is not {A.group}")
    if not phi.is_surjective():
        raise StructuralError("the homomorphism is not surjective")
    return DifferenceMatrix(phi.target, A.lam * phi.kernel_order(), phi.apply_coords(A.entries))


def hom_image_cdm(M: ContractedDifferenceMatrix, phi: Homomorphism) -> ContractedDifferenceMatrix:
    _require_verified(M)
    if phi.source != M.group:
        raise StructuralError(f"homomorphism source {phi.source} is not {M.group}")
    if not phi.is_surjective():
        raise StructuralError("the homomorphism is not surjective")
    u = phi.source.n - phi.target.n
    return ContractedDifferenceMatrix(phi.target, M.s + u, phi.apply_coords(M.entries))


# -- compositions -------------------------------------------------------------


def kronecker_compose_dm(A: DifferenceMatrix, B: DifferenceMatrix, sub: DiagonalSubgroup) -> DifferenceMatrix:
    """Row ``i`` is the Kronecker product of row ``i`` of ``A`` (over the subgroup)
    and row ``i`` of ``B`` (over the quotient, lifted); ``A`` columns vary slowest."""
    _require_verified(A, B)
    if A.group != sub.subgroup or B.group != sub.quotient:
        raise StructuralError(f"expected matrices over {sub.subgroup} and {sub.quotient}")
    if A.nrows != B.nrows:
        raise StructuralError("row counts differ")
    a = sub.embed_coords(A.entries)
    b = sub.rep_coords(B.entries)
    out = a[:, :, None, :] + b[:, None, :, :]
    m = A.nrows
    return DifferenceMatrix(sub.host, A.lam * B.lam, sub.host.reduce(out.reshape(m, -1, sub.host.rank)))


def concat_compose_cdm(L: ContractedDifferenceMatrix, M: ContractedDifferenceMatrix,
                       sub: DiagonalSubgroup) -> ContractedDifferenceMatrix:
    """``[embed(L) | lift(M)]`` for ``L`` over the subgroup and ``M`` over the quotient."""
    _require_verified(L, M)
    if L.group != sub.subgroup or M.group != sub.quotient:
        raise StructuralError(f"expected matrices over {sub.subgroup} and {sub.quotient}")
    if L.nrows != M.nrows:
        raise StructuralError("row counts differ")
    ent = np.concatenate([sub.embed_coords(L.entries), sub.rep_coords(M.entries)], axis=1)
    return ContractedDifferenceMatrix(sub.host, L.s + M.s, ent)


def sum_compose_dm(A: DifferenceMatrix, B: DifferenceMatrix) -> DifferenceMatrix:
    _require_verified(A, B)
    if A.group != B.group:
        raise StructuralError("matrices are over different groups")
    if A.nrows != B.nrows:
        raise StructuralError("row counts differ")
    out = DifferenceMatrix(A.group, A.lam + B.lam, np.concatenate([A.entries, B.entries], axis=1))
    if not verify_dm(out):
        raise VerificationError("concatenation failed its verification gate")
    return out


def product_compose_dm(A: DifferenceMatrix, B: DifferenceMatrix) -> DifferenceMatrix:
    """Rows ``(i, i')``, columns ``(j, j')``, entry ``a_ij + b_i'j'``."""
    _require_verified(A, B)
    if A.group != B.group:
        raise StructuralError("matrices are over different groups")
    G = A.group
    out = A.entries[:, None, :, None, :] + B.entries[None, :, None, :, :]
    m, m2, c, c2 = A.nrows, B.nrows, A.ncols, B.ncols
    res = DifferenceMatrix(G, A.lam * B.lam * G.order, G.reduce(out.reshape(m * m2, c * c2, G.rank)))
    if not verify_dm(res):
        raise VerificationError("product construction failed its verification gate")
    return res


# -- subgroup chains ----------------------------------------------------------


@dataclass
class ChainPlan:
    """A chain ``G = G_0 > G_1 > ... > G_r`` of diagonal subgroups.

    ``levels[i]`` holds the cofactors of ``G_{i+1}`` measured in ``G`` itself,
    so coordinates always refer to host positions.  Quotient ``G_{i-1}/G_i``
    and the terminal ``G_r`` are presented canonically, ties between equal
    factors broken by host position.
    """

    group: GroupSpec
    levels: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        prev = (0,) * self.group.rank
        clean = []
        for c in self.levels:
            c = tuple(int(x) for x in c)
            DiagonalSubgroup(self.group, c)
            if any(x < y for x, y in zip(c, prev)) or c == prev:
                raise StructuralError(f"chain level {c} does not shrink {prev}")
            clean.append(c)
            prev = c
        self.levels = clean

    @classmethod
    def from_relative(cls, group: GroupSpec, steps: Sequence[Sequence[int]]) -> ChainPlan:
        """Build from cofactors given in the canonical coordinates of each ``G_i``."""
        levels, cur = [], (0,) * group.rank
        for b in steps:
            sizes = [a - c for a, c in zip(group.exponents, cur)]
            pos = sorted((j for j in range(group.rank) if sizes[j] > 0), key=lambda j: -sizes[j])
            if len(b) != len(pos):
                raise StructuralError(f"step {tuple(b)} does not match a subgroup of rank {len(pos)}")
            nxt = list(cur)
            for t, j in enumerate(pos):
                nxt[j] += int(b[t])
            cur = tuple(nxt)
            levels.append(cur)
        return cls(group, levels)

    def _level(self, i: int) -> tuple[int, ...]:
        return (0,) * self.group.rank if i == 0 else self.levels[i - 1]

    @property
    def r(self) -> int:
        return len(self.levels)

    @property
    def subgroups(self) -> list[DiagonalSubgroup]:
        """``G_1, ..., G_r`` as diagonal subgroups of ``G``."""
        return [DiagonalSubgroup(self.group, c) for c in self.levels]

    def quotient_positions(self, i: int) -> list[int]:
        lo, hi = self._level(i - 1), self._level(i)
        return sorted((j for j in range(self.group.rank) if hi[j] > lo[j]), key=lambda j: -(hi[j] - lo[j]))

    def quotient(self, i: int) -> GroupSpec:
        """``G_{i-1}/G_i`` for ``1 <= i <= r``."""
        lo, hi = self._level(i - 1), self._level(i)
        return GroupSpec(self.group.p, tuple(hi[j] - lo[j] for j in self.quotient_positions(i)))

    @property
    def quotients(self) -> list[GroupSpec]:
        return [self.quotient(i) for i in range(1, self.r + 1)]

    @property
    def terminal(self) -> GroupSpec:
        return DiagonalSubgroup(self.group, self._level(self.r)).subgroup

    def lift_quotient(self, i: int, coords: np.ndarray) -> np.ndarray:
        """Coset representatives in ``G`` of quotient ``i`` coordinates."""
        coords = np.asarray(coords, dtype=np.int64)
        lo = self._level(i - 1)
        pos = self.quotient_positions(i)
        out = np.zeros(coords.shape[:-1] + (self.group.rank,), dtype=np.int64)
        if pos:
            steps = np.array([self.group.p ** lo[j] for j in pos], dtype=np.int64)
            out[..., pos] = coords * steps
        return out

    def embed_terminal(self, coords: np.ndarray) -> np.ndarray:
        return DiagonalSubgroup(self.group, self._level(self.r)).embed_coords(coords)

    def __str__(self) -> str:
        return " > ".join([str(self.group)] + [str(s.subgroup) for s in self.subgroups])


def floor_n_over_e(spec: GroupSpec) -> int:
    if spec.is_trivial:
        raise StructuralError("the trivial group has no chain")
    return spec.n // spec.e


def buratti_chain(spec: GroupSpec) -> ChainPlan:
    """Reduce the ``n // e`` largest factors each step until elementary abelian.

    Ties between equal factors go to the earlier host position.
    """
    s = floor_n_over_e(spec)
    levels, cur = [], [0] * spec.rank
    while True:
        sizes = [a - c for a, c in zip(spec.exponents, cur)]
        if all(x <= 1 for x in sizes):
            break
        order = sorted((j for j in range(spec.rank) if sizes[j] > 0), key=lambda j: -sizes[j])
        for j in order[:s]:
            cur[j] += 1
        levels.append(tuple(cur))
    return ChainPlan(spec, levels)


def _field_rows(spec: GroupSpec, k: int) -> ContractedDifferenceMatrix:
    """Field matrix over an elementary abelian group, cut to ``k`` rows and verified."""
    if not spec.is_elementary_abelian:
        raise StructuralError(f"{spec} is not elementary abelian")
    if k > spec.n:
        raise StructuralError(f"{spec} has no ({spec},{k},0) field matrix")
    M = delete_rows(contracted_field_cdm(spec.p, spec.n), range(k, spec.n))
    if not verify_cdm_fast(M):
        raise VerificationError("field matrix failed verification")
    return M


def compose_chain_cdm(plan: ChainPlan, k: int,
                      base: Callable[[GroupSpec, int], ContractedDifferenceMatrix] | None = None
                      ) -> ContractedDifferenceMatrix:
    """``[L_r | M_r | ... | M_1]`` from base matrices on the terminal and each quotient.

    Each block is verified before use; the concatenation is valid by repeated
    application of the concatenation composition.
    """
    base = base or _field_rows
    blocks = []
    L = base(plan.terminal, k)
    _require_verified(L)
    blocks.append(plan.embed_terminal(L.entries))
    s = L.s
    for i in range(plan.r, 0, -1):
        M = base(plan.quotient(i), k)
        _require_verified(M)
        blocks.append(plan.lift_quotient(i, M.entries))
        s += M.s
    return ContractedDifferenceMatrix(plan.group, s, np.concatenate(blocks, axis=1))


def chain_cdm(spec: GroupSpec, plan: ChainPlan | None = None) -> ContractedDifferenceMatrix:
    """A ``(G, n // e, 0)`` matrix from field matrices along a Buratti chain."""
    plan = plan or buratti_chain(spec)
    if plan.group != spec:
        raise StructuralError("plan is for a different group")
    return compose_chain_cdm(plan, floor_n_over_e(spec))


def chain_dm(spec: GroupSpec, plan: ChainPlan | None = None) -> DifferenceMatrix:
    """The ``(G, p^(n//e), 1)`` expansion of :func:`chain_cdm`."""
    return p_expand(chain_cdm(spec, plan))


def chain_dm_kronecker(plan: ChainPlan, m: int) -> DifferenceMatrix:
    """Kronecker-compose field tables along ``plan``, keeping ``m`` rows of each.

    Columns come out with the terminal block varying slowest.
    """

    def base(spec: GroupSpec) -> DifferenceMatrix:
        if not spec.is_elementary_abelian:
            raise StructuralError(f"{spec} is not elementary abelian")
        D = drake_dm(spec.p, spec.n)
        if m > D.nrows:
            raise StructuralError(f"{spec} supplies only {D.nrows} rows")
        return delete_rows(D, range(m, D.nrows))

    G = plan.group
    acc = plan.embed_terminal(base(plan.terminal).entries)
    lam = 1
    for i in range(plan.r, 0, -1):
        B = base(plan.quotient(i))
        lam *= B.lam
        b = plan.lift_quotient(i, B.entries)
        acc = (acc[:, :, None, :] + b[:, None, :, :]).reshape(m, -1, G.rank)
    return DifferenceMatrix(G, lam, G.reduce(acc))


# -- abelian noncyclic 2-groups -----------------------------------------------


def pan_chang_column_sets(e: int) -> tuple[list[int], list[int], list[int], list[int]]:
    """``I_1, I_2, I_1*, I_2*`` for ``e >= 2``."""
    h, top = 2 ** (e - 2), 2 ** (e - 1)
    I1 = list(range(0, h))
    I2 = list(range(h, top))
    I1s = sorted((set(I1) - {h - 1}) | {top - 1})
    I2s = sorted((set(I2) - {top - 1}) | {h - 1})
    return I1, I2, I1s, I2s


def pan_chang_dm(e: int) -> DifferenceMatrix:
    """A ``(Z_{2^e} x Z_2, 4, 1)`` matrix ``[D_0 | D_1 | D_2 | D_3]``."""
    if e < 1:
        raise StructuralError("e must be positive")
    if e == 1:
        return drake_dm(2, 2)
    G = GroupSpec(2, (e, 1))
    I1, I2, I1s, I2s = pan_chang_column_sets(e)
    cols = []
    for r in range(4):
        for i in range(2 ** (e - 1)):
            if r == 0:
                first = i in I1
                c = [(0, 0), (2 * i, 0), (4 * i, 0 if first else 1), (-2 * i, 0 if first else 1)]
            elif r == 1:
                first = i in I1
                c = [(0, 0), (2 * i, 1), (4 * i + 1, 0 if first else 1), (-2 * i - 1, 1 if first else 0)]
            elif r == 2:
                first = i in I1
                c = [(0, 0), (2 * i + 1, 0), (4 * i + 2, 0 if first else 1), (-2 * i - 1, 0 if first else 1)]
            else:
                first = i in I1s
                c = [(0, 0), (2 * i + 1, 1), (4 * i + 3, 0 if first else 1), (-2 * i - 2, 1 if first else 0)]
            cols.append(c)
    ent = np.array(cols, dtype=np.int64).transpose(1, 0, 2)
    return DifferenceMatrix(G, 1, G.reduce(ent))


def pan_chang_cdm(e: int) -> ContractedDifferenceMatrix:
    """The ``2 x (e+1)`` matrix over ``Z_{2^e} x Z_2``."""
    if e < 1:
        raise StructuralError("e must be positive")
    G = GroupSpec(2, (e, 1))
    top = [(0, 1)] + [(2**t, 0) for t in range(e)]
    bot = [(2 ** (e - 1), 1), (0, 1)] + [(2**t, 0) for t in range(e - 1)]
    return ContractedDifferenceMatrix.from_rows(G, 0, [top, bot])


def _verified(M):
    if not verify_cdm_fast(M):
        raise VerificationError(f"{M!r} failed verification")
    return M


def noncyclic2_cdm(spec: GroupSpec, pair: tuple[int, int] | None = None,
                   quotient_first: bool = False) -> ContractedDifferenceMatrix:
    """A ``(G, 2, 0)`` matrix for an abelian noncyclic 2-group.

    Peels a subgroup ``H = Z_2^2`` sitting on two factors, recursing on the
    noncyclic quotient ``G/H``.  By default the first position pair leaving a
    noncyclic quotient is used and the result is ``[embed(L_H) | lift(M)]``;
    ``pair`` and ``quotient_first`` override those choices at the top level.
    """
    if spec.p != 2 or spec.rank < 2:
        raise UnsupportedError(f"{spec} is not an abelian noncyclic 2-group")
    if pair is None:
        if spec.exponents == (1, 1):
            return contracted_field_cdm(2, 2)
        if spec.rank == 2 and spec.exponents[1] == 1:
            return pan_chang_cdm(spec.exponents[0])
        if spec.exponents == (1, 1, 1):
            return delete_rows(contracted_field_cdm(2, 3), [2])
    b = None
    pairs = [pair] if pair is not None else [(i, j) for i in range(spec.rank) for j in range(i + 1, spec.rank)]
    for i, j in pairs:
        cof = [a - 1 if t in (i, j) else a for t, a in enumerate(spec.exponents)]
        if sum(1 for x in cof if x > 0) >= 2:
            b = tuple(cof)
            break
    if b is None:
        raise UnsupportedError(f"no Z_2^2 subgroup of {spec} leaves a noncyclic quotient")
    sub = DiagonalSubgroup(spec, b)
    L = _verified(contracted_field_cdm(2, 2))
    M = _verified(noncyclic2_cdm(sub.quotient))
    out = concat_compose_cdm(L, M, sub)
    if quotient_first:
        n_l = L.ncols
        out = ContractedDifferenceMatrix(spec, 0, np.concatenate([out.entries[:, n_l:], out.entries[:, :n_l]], axis=1))
    out.verified = False
    return out


# -- best known chains --------------------------------------------------------


def library_cdm(spec: GroupSpec, k: int) -> ContractedDifferenceMatrix | None:
    """A verified ``(spec, k, 0)`` base case, or ``None``."""
    if k < 1:
        return None
    if k == 1:
        return _verified(trivial_cdm(spec))
    if spec.is_elementary_abelian and spec.rank >= k:
        return _field_rows(spec, k)
    if spec.p == 2 and k <= 3 and spec.exponents in SEARCHED_CDMS:
        return _verified(delete_rows(searched_cdm(spec), range(k, 3)))
    if spec.p == 2 and k <= 2 and spec.rank == 2 and spec.exponents[1] == 1:
        return _verified(delete_rows(pan_chang_cdm(spec.exponents[0]), range(k, 2)))
    return None


def _library_rank(spec: GroupSpec, k: int) -> tuple[int, int]:
    """Preference for a quotient: elementary abelian first, then larger order."""
    return (0 if spec.is_elementary_abelian else 1, -spec.order)


@lru_cache(maxsize=None)
def _best_plan(spec: GroupSpec, k: int) -> tuple[tuple[int, ...], ...] | None:
    """Relative cofactor steps of a chain whose quotients and terminal are library groups."""
    if library_cdm(spec, k) is not None:
        return ()
    options = []
    for b in product(*(range(a + 1) for a in spec.exponents)):
        if not any(b) or b == spec.exponents:
            continue
        sub = DiagonalSubgroup(spec, b)
        if library_cdm(sub.quotient, k) is None:
            continue
        options.append((_library_rank(sub.quotient, k), b, sub))
    options.sort(key=lambda t: t[0])
    for _, b, sub in options:
        rest = _best_plan(sub.subgroup, k)
        if rest is not None:
            return (b,) + rest
    return None


def best_known_plan(spec: GroupSpec, k: int) -> ChainPlan | None:
    steps = _best_plan(spec, k)
    return None if steps is None else ChainPlan.from_relative(spec, steps)


def best_known_cdm(spec: GroupSpec, k: int, plan: ChainPlan | None = None) -> ContractedDifferenceMatrix | None:
    """A verified ``(G, k, 0)`` matrix from a chain of library quotients, or ``None``.

    ``None`` only means that no chain was found.
    """
    plan = plan or best_known_plan(spec, k)
    if plan is None:
        return None

    def base(g: GroupSpec, kk: int) -> ContractedDifferenceMatrix:
        M = library_cdm(g, kk)
        if M is None:
            raise UnsupportedError(f"{g} has no library ({g},{kk},0) matrix")
        return M

    out = compose_chain_cdm(plan, k, base)
    if not verify_cdm_fast(out):
        raise VerificationError(f"chain {plan} produced an invalid matrix")
    return out


def best_known_k(spec: GroupSpec) -> int:
    k = 1
    while k < spec.n and _best_plan(spec, k + 1) is not None:
        k += 1
    return k


def table2_source(spec: GroupSpec, k: int) -> str:
    """The kind of result that supplies ``k`` rows for ``spec``."""
    if k == 1:
        return "trivial"
    if spec.is_elementary_abelian:
        return "chain"
    if k == 2:
        return "noncyclic2"
    if floor_n_over_e(spec) >= k:
        return "chain"
    return "computer_search"
